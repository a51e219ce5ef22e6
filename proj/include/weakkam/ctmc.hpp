#pragma once

#include <cstdint>
#include <vector>

#include "weakkam/lattice.hpp"
#include "weakkam/perron.hpp"
#include "weakkam/potential.hpp"
#include "weakkam/rate.hpp"

namespace weakkam {

/// Right-continuous jump path of the walk on Gamma_k. Each jump moves one
/// site; `steps` records the direction so the lift to the real line is
/// unambiguous even for k = 2.
struct CadlagPath {
  int k = 0;
  double T = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<double> jump_times;
  std::vector<int> states;
  std::vector<int> steps;

  std::size_t jumps() const noexcept { return jump_times.size(); }
  /// Lifted positions (site index / k) after 0, 1, ..., jumps() jumps.
  std::vector<double> lifted_positions() const;
  /// Site index occupied at time t.
  int state_at(double t) const;
};

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
};

/// Speed-k symmetric walk: holding times Exp(2k), +-1 with probability 1/2,
/// started at nearest_site(x0, k). Path `stream` of seed `seed`.
CadlagPath simulate_walk(int k, double T, double x0, std::uint64_t seed, std::uint64_t stream = 0);

/// Time-inhomogeneous walk with rates k e^{lambda(t)} to the right and
/// k e^{-lambda(t)} to the left, sampled exactly by thinning against a
/// constant envelope on every segment of lambda.
CadlagPath simulate_tilted(int k, double T, double x0, const TiltSchedule& lambda, std::uint64_t seed,
                           std::uint64_t stream = 0);

/// log M_T, evaluated segment by segment: k sum_i [lambda(t_{i+1}) X(t_{i+1})
/// - lambda(t_i) X(t_i) - int (lambda' X + H(lambda))]. X is the lifted path.
double log_exp_martingale(const CadlagPath& path, const TiltSchedule& lambda);
double exp_martingale(const CadlagPath& path, const TiltSchedule& lambda);

/// Exact integral of V(X_s) over [0, T] from the holding intervals.
double occupation_integral(const CadlagPath& path, const Potential& V);

/// (1/k) log of the sample mean of exp(k (int V(X) ds + u(X_T))), combined in
/// log space; standard error by the delta method.
McEstimate feynman_kac(int k, double T, double x0, const Potential& V, const FineGrid& u, long n_samples,
                       std::uint64_t seed, int threads = 1);

/// (1/k) log [e^{T (k L_k + k V_k)} e^{k u}](site of x0) from the dense matrix
/// exponential. k <= 64.
double feynman_kac_exact(int k, double T, double x0, const Potential& V, const FineGrid& u);

/// (1/k) log pi_{k,V}{j : a <= j/k <= b}.
double empirical_ldp(const StationaryMeasure& sm, double a, double b);
double empirical_ldp(int k, const Potential& V, double a, double b);

/// sup over [0, T] of |X(t) - gamma(t)| with X lifted.
double tube_distance(const CadlagPath& path, const PiecewisePath& gamma);

/// Fraction of walks tilted by optimal_tilt(slope) that stay within delta of
/// the straight line through their start with that slope.
double tube_fraction(int k, double slope, double delta, double T, long n_paths, std::uint64_t seed,
                     int threads = 1);

struct ConcentrationSearch {
  int k = 0;  // 0 when no k up to k_max reached the threshold
  std::vector<std::pair<int, double>> trace;
};

/// Doubles k from k_start until tube_fraction exceeds threshold.
ConcentrationSearch tilted_concentration_search(double slope, double delta, double T, long n_paths,
                                                std::uint64_t seed, int k_start = 2, int k_max = 1 << 14,
                                                double threshold = 0.75, int threads = 1);

}  // namespace weakkam
