#include "weakkam/matrix_exp.hpp"

#include <algorithm>
#include <cmath>

#include "weakkam/errors.hpp"

namespace weakkam {

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) throw invalid_input("matrix_exponential needs a square matrix");
  constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                          1187353796428800.0,  129060195264000.0,   10559470521600.0,
                          670442572800.0,      33522128640.0,       1323241920.0,
                          40840800.0,          960960.0,            16380.0,
                          182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = A.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / theta13))));
  const Eigen::MatrixXd S = A / std::ldexp(1.0, squarings);

  const auto n = S.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd S2 = S * S;
  const Eigen::MatrixXd S4 = S2 * S2;
  const Eigen::MatrixXd S6 = S4 * S2;
  const Eigen::MatrixXd U =
      S * (S6 * (b[13] * S6 + b[11] * S4 + b[9] * S2) + b[7] * S6 + b[5] * S4 + b[3] * S2 + b[1] * I);
  const Eigen::MatrixXd V =
      S6 * (b[12] * S6 + b[10] * S4 + b[8] * S2) + b[6] * S6 + b[4] * S4 + b[2] * S2 + b[0] * I;
  Eigen::MatrixXd R = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) R = R * R;
  return R;
}

}  // namespace weakkam
