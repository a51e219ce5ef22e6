#pragma once

#include <Eigen/Dense>

namespace weakkam {

/// exp(A) by scaling and squaring with the [13/13] Pade approximant
/// (Higham 2005). Meant for small dense matrices.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

}  // namespace weakkam
