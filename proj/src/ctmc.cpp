#include "weakkam/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weakkam/errors.hpp"
#include "weakkam/matrix_exp.hpp"
#include "weakkam/parallel.hpp"
#include "weakkam/philox.hpp"

namespace weakkam {

namespace {

void check_walk_args(int k, double T) {
  if (k < 2) throw invalid_lattice("k must be at least 2");
  if (!(T > 0.0) || !std::isfinite(T)) throw invalid_input("horizon T must be positive and finite");
}

void push_jump(CadlagPath& p, double t, int step) {
  p.jump_times.push_back(t);
  p.steps.push_back(step);
  const int next = p.states.back() + step;
  p.states.push_back(next == p.k ? 0 : (next < 0 ? p.k - 1 : next));
}

// number of jumps at or before t
std::size_t jumps_until(const CadlagPath& p, double t) {
  return static_cast<std::size_t>(std::upper_bound(p.jump_times.begin(), p.jump_times.end(), t) -
                                  p.jump_times.begin());
}

double integral_of(const std::vector<double>& pos, const CadlagPath& p, double a, double b) {
  std::size_t idx = jumps_until(p, a);
  double cur = a, sum = 0.0;
  while (idx < p.jumps() && p.jump_times[idx] < b) {
    sum += pos[idx] * (p.jump_times[idx] - cur);
    cur = p.jump_times[idx];
    ++idx;
  }
  return sum + pos[idx] * (b - cur);
}

// (e^b - e^a)/(b - a), the mean of e^x over [a, b]
double mean_exp(double a, double b) {
  const double d = b - a;
  if (d == 0.0) return std::exp(a);
  return std::exp(a) * std::expm1(d) / d;
}

}  // namespace

std::vector<double> CadlagPath::lifted_positions() const {
  std::vector<double> out(states.size());
  long idx = states.empty() ? 0 : states.front();
  out[0] = static_cast<double>(idx) / k;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    idx += steps[i];
    out[i + 1] = static_cast<double>(idx) / k;
  }
  return out;
}

int CadlagPath::state_at(double t) const { return states[jumps_until(*this, t)]; }

CadlagPath simulate_walk(int k, double T, double x0, std::uint64_t seed, std::uint64_t stream) {
  check_walk_args(k, T);
  CadlagPath p{k, T, seed, stream, {}, {nearest_site(x0, k)}, {}};
  Philox4x32 rng(seed, stream);
  const double rate = 2.0 * k;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate);
    if (t > T) break;
    push_jump(p, t, (rng() & 1u) ? 1 : -1);
  }
  return p;
}

CadlagPath simulate_tilted(int k, double T, double x0, const TiltSchedule& lambda, std::uint64_t seed,
                           std::uint64_t stream) {
  check_walk_args(k, T);
  if (std::abs(lambda.T() - T) > 1e-12 * std::max(1.0, T))
    throw invalid_input("tilt schedule horizon does not match T");
  CadlagPath p{k, T, seed, stream, {}, {nearest_site(x0, k)}, {}};
  Philox4x32 rng(seed, stream);
  const auto& times = lambda.line.times();
  const auto& vals = lambda.line.values();
  for (std::size_t s = 0; s + 1 < times.size(); ++s) {
    const double a = times[s];
    const double b = (s + 2 == times.size()) ? T : times[s + 1];
    const double lmax = std::max(vals[s], vals[s + 1]);
    const double lmin = std::min(vals[s], vals[s + 1]);
    if (std::max(std::abs(lmax), std::abs(lmin)) > 700.0) throw range_error("tilt magnitude exceeds 700");
    const double envelope = std::exp(lmax) + std::exp(-lmin);
    const double slope = lambda.line.slope(s);
    double t = a;
    for (;;) {
      t += rng.exponential(k * envelope);
      if (t > b) break;
      const double l = vals[s] + slope * (t - a);
      const double right = std::exp(l), left = std::exp(-l);
      if (rng.uniform() * envelope > right + left) continue;
      push_jump(p, t, rng.uniform() * (right + left) <= right ? 1 : -1);
    }
  }
  return p;
}

double log_exp_martingale(const CadlagPath& path, const TiltSchedule& lambda) {
  if (std::abs(lambda.T() - path.T) > 1e-12 * std::max(1.0, path.T))
    throw invalid_input("tilt schedule horizon does not match the path");
  const auto pos = path.lifted_positions();
  const auto& times = lambda.line.times();
  const auto& vals = lambda.line.values();
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < times.size(); ++s) {
    const double a = times[s], b = times[s + 1];
    const double la = vals[s], lb = vals[s + 1];
    if (std::max(std::abs(la), std::abs(lb)) > 700.0) throw range_error("tilt magnitude exceeds 700");
    const double xa = pos[jumps_until(path, a)];
    const double xb = pos[jumps_until(path, b)];
    double seg = lb * xb - la * xa;
    const double slope = lambda.line.slope(s);
    if (slope != 0.0) seg -= slope * integral_of(pos, path, a, b);
    // integral of e^l + e^-l - 2 along the linear piece
    seg -= (b - a) * (mean_exp(la, lb) + mean_exp(-la, -lb) - 2.0);
    sum += seg;
  }
  return path.k * sum;
}

double exp_martingale(const CadlagPath& path, const TiltSchedule& lambda) {
  return std::exp(log_exp_martingale(path, lambda));
}

double occupation_integral(const CadlagPath& path, const Potential& V) {
  double sum = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < path.jumps(); ++i) {
    sum += V(static_cast<double>(path.states[i]) / path.k) * (path.jump_times[i] - prev);
    prev = path.jump_times[i];
  }
  return sum + V(static_cast<double>(path.states.back()) / path.k) * (path.T - prev);
}

McEstimate feynman_kac(int k, double T, double x0, const Potential& V, const FineGrid& u, long n_samples,
                       std::uint64_t seed, int threads) {
  check_walk_args(k, T);
  if (n_samples < 1000) throw invalid_input("feynman_kac needs at least 1000 samples");
  if (u.size() == 0) throw invalid_input("terminal profile is empty");
  std::vector<double> site_v(static_cast<std::size_t>(k)), site_u(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    site_v[j] = V(static_cast<double>(j) / k);
    site_u[j] = u.at(static_cast<double>(j) / k);
  }
  const int start = nearest_site(x0, k);

  std::vector<double> w(static_cast<std::size_t>(n_samples));
  parallel_for(w.size(), resolve_threads(threads), [&](std::size_t i) {
    Philox4x32 rng(seed, i);
    const double rate = 2.0 * k;
    int x = start;
    double t = 0.0, integral = 0.0;
    for (;;) {
      const double hold = rng.exponential(rate);
      if (t + hold > T) {
        integral += site_v[x] * (T - t);
        break;
      }
      integral += site_v[x] * hold;
      t += hold;
      x += (rng() & 1u) ? 1 : -1;
      if (x == k) x = 0;
      if (x < 0) x = k - 1;
    }
    w[i] = k * (integral + site_u[x]);
  });

  const double m = *std::max_element(w.begin(), w.end());
  if (!std::isfinite(m)) throw numerical_degeneracy("non-finite Feynman-Kac weight");
  double mean = 0.0;
  for (double x : w) mean += std::exp(x - m);
  mean /= static_cast<double>(n_samples);
  double var = 0.0;
  for (double x : w) {
    const double d = std::exp(x - m) - mean;
    var += d * d;
  }
  var /= static_cast<double>(n_samples - 1);
  if (!(mean > 0.0) || !std::isfinite(mean)) throw numerical_degeneracy("Feynman-Kac sample mean degenerated");
  const double se_log = std::sqrt(var / static_cast<double>(n_samples)) / mean;
  return {(m + std::log(mean)) / k, se_log / k, n_samples, seed};
}

double feynman_kac_exact(int k, double T, double x0, const Potential& V, const FineGrid& u) {
  check_walk_args(k, T);
  if (k > 64) throw invalid_input("exact Feynman-Kac is limited to k <= 64");
  const auto A = schrodinger_matrix(k, V);
  const double vmax = V.max_value();
  // shift by the largest potential value to keep the exponential bounded
  Eigen::MatrixXd M = A.to_dense();
  M.diagonal().array() -= k * vmax;
  const Eigen::MatrixXd E = matrix_exponential(T * M);
  Eigen::VectorXd eu(k);
  double umax = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < k; ++j) umax = std::max(umax, u.at(static_cast<double>(j) / k));
  for (int j = 0; j < k; ++j) eu[j] = std::exp(k * (u.at(static_cast<double>(j) / k) - umax));
  const double val = E.row(nearest_site(x0, k)).dot(eu);
  if (!(val > 0.0)) throw numerical_degeneracy("exact Feynman-Kac value underflowed");
  return std::log(val) / k + T * vmax + umax;
}

double empirical_ldp(const StationaryMeasure& sm, double a, double b) {
  const int k = sm.k;
  double m = -std::numeric_limits<double>::infinity();
  std::vector<double> picked;
  for (int j = 0; j < k; ++j) {
    const double x = static_cast<double>(j) / k;
    if (x >= a - 1e-12 && x <= b + 1e-12) {
      picked.push_back(sm.log_pi[j]);
      m = std::max(m, sm.log_pi[j]);
    }
  }
  if (picked.empty()) throw invalid_input("interval contains no lattice site");
  double s = 0.0;
  for (double l : picked) s += std::exp(l - m);
  return (m + std::log(s)) / k;
}

double empirical_ldp(int k, const Potential& V, double a, double b) {
  const auto pd = perron_solve(k, V);
  return empirical_ldp(stationary_measure(pd, V.id()), a, b);
}

double tube_distance(const CadlagPath& path, const PiecewisePath& gamma) {
  const auto pos = path.lifted_positions();
  const auto& gt = gamma.line.times();
  double worst = 0.0;
  auto check = [&](double t, double x) { worst = std::max(worst, std::abs(x - gamma.line.at(t))); };
  double start = 0.0;
  for (std::size_t i = 0; i <= path.jumps(); ++i) {
    const double end = i < path.jumps() ? path.jump_times[i] : path.T;
    check(start, pos[i]);
    check(end, pos[i]);
    for (auto it = std::upper_bound(gt.begin(), gt.end(), start); it != gt.end() && *it < end; ++it)
      check(*it, pos[i]);
    start = end;
  }
  return worst;
}

double tube_fraction(int k, double slope, double delta, double T, long n_paths, std::uint64_t seed,
                     int threads) {
  check_walk_args(k, T);
  if (n_paths < 1) throw invalid_input("need at least one path");
  const auto tilt = TiltSchedule::constant(optimal_tilt(slope), T);
  std::vector<unsigned char> inside(static_cast<std::size_t>(n_paths));
  parallel_for(inside.size(), resolve_threads(threads), [&](std::size_t i) {
    const auto p = simulate_tilted(k, T, 0.0, tilt, seed, i);
    const auto gamma = PiecewisePath::from({0.0, T}, {0.0, slope * T});
    inside[i] = tube_distance(p, gamma) < delta ? 1 : 0;
  });
  long hits = 0;
  for (auto b : inside) hits += b;
  return static_cast<double>(hits) / static_cast<double>(n_paths);
}

ConcentrationSearch tilted_concentration_search(double slope, double delta, double T, long n_paths,
                                                std::uint64_t seed, int k_start, int k_max, double threshold,
                                                int threads) {
  ConcentrationSearch out;
  for (int k = std::max(2, k_start); k <= k_max; k *= 2) {
    const double f = tube_fraction(k, slope, delta, T, n_paths, seed, threads);
    out.trace.emplace_back(k, f);
    if (f > threshold) {
      out.k = k;
      break;
    }
  }
  return out;
}

}  // namespace weakkam
