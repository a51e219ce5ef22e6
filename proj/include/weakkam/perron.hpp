#pragma once

#include <string>
#include <utility>
#include <vector>

#include "weakkam/lattice.hpp"
#include "weakkam/potential.hpp"

namespace weakkam {

/// Principal eigen-data of k L_k + k V_k.
///
/// u is the positive right eigenfunction, mu the left eigenvector scaled to
/// a probability, and the pair is jointly normalized so that sum u_j mu_j = 1.
/// residual is max_j |(A u - lambda u)_j| / max_j u_j.
struct PerronData {
  int k;
  double lambda;
  GridFunction u;
  GridFunction mu;
  double residual;
  long iterations;
};

/// The Doob-normalized chain with jump rates k u[j+1]/u[j] and k u[j-1]/u[j].
struct GibbsChain {
  Lattice lattice;
  std::vector<double> rates_right;
  std::vector<double> rates_left;

  /// Generator with rows summing to zero exactly.
  GeneratorMatrix generator() const;
};

struct StationaryMeasure {
  GridFunction pi;
  int k;
  std::string potential_id;
  /// log(u_j) + log(mu_j), accurate where pi_j itself would underflow.
  std::vector<double> log_pi;
  /// max_m |(pi^T G)_m| for the Gibbs generator G.
  double stationarity_residual;
};

inline constexpr double default_perron_tol = 1e-10;
inline constexpr long default_perron_max_iters = 1'000'000;

/// Power iteration on the nonnegative shift A + s I of A = k L_k + k V_k.
/// Convergence is declared on the eigen-residual: both the sup-norm residual
/// and max_j |(A u - lambda u)_j| / u_j must be <= tol, the second so that the
/// Doob-transformed generator is accurate at sites where u is tiny. Throws
/// iteration_limit or irreducibility_violation.
PerronData perron_solve(int k, const Potential& V, double tol = default_perron_tol,
                        long max_iters = default_perron_max_iters);

/// Two-sided power iteration (right and left separately) for any irreducible
/// circulant tridiagonal matrix with nonnegative couplings. Used to cross-check
/// the symmetric shortcut.
PerronData perron_solve_two_sided(const GeneratorMatrix& A, double tol = default_perron_tol,
                                  long max_iters = default_perron_max_iters);

/// (1/k) <psi, (k L_k + k V_k) psi>_{pi_k} with pi_k uniform and psi rescaled
/// to unit norm sqrt((1/k) sum psi^2) = 1.
double rayleigh_quotient(const GridFunction& psi, int k, const Potential& V);

GibbsChain gibbs_generator(const PerronData& pd);

/// pi_j = u_j mu_j. Throws inconsistent_eigendata if pi fails to annihilate
/// the Gibbs generator to 1e-6.
StationaryMeasure stationary_measure(const PerronData& pd, std::string potential_id = {});

/// ((1/k) log u, (1/k) log mu), each extended to fine_n points.
std::pair<FineGrid, FineGrid> log_profiles(const PerronData& pd, std::size_t fine_n);

/// -(1/k) log pi extended to fine_n points and shifted to have minimum 0.
FineGrid empirical_rate_profile(const StationaryMeasure& sm, std::size_t fine_n);

/// Relative entropy rate of the Gibbs chain: sum_j k V(j/k) pi_j - lambda.
double entropy(const PerronData& pd, const StationaryMeasure& sm, int k, const Potential& V);

}  // namespace weakkam
