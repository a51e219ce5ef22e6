#include "weakkam/perron.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "weakkam/errors.hpp"
#include "weakkam/format.hpp"

namespace weakkam {

namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void scale_to_unit_max(std::vector<double>& x) {
  double m = max_abs(x);
  for (double& v : x) v /= m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double relative_residual(std::span<const double> ax, std::span<const double> x, double lambda) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(ax[i] - lambda * x[i]));
  return r / max_abs(x);
}

// max_j |(Ax - lambda x)_j| / x_j. This is what the Doob transform sees, since
// its diagonal divides the residual by u_j.
double entrywise_residual(std::span<const double> ax, std::span<const double> x, double lambda) {
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(ax[i] - lambda * x[i]) / x[i]);
  return r;
}

void require_positive(const std::vector<double>& x, const char* what) {
  for (double v : x) {
    if (!(v > 0.0)) {
      throw irreducibility_violation(std::string(what) + " has a non-positive entry; the matrix is not irreducible "
                                                          "or the entry underflowed");
    }
  }
}

// Shift making every diagonal entry strictly positive, so that A + sI is
// nonnegative and primitive.
double primitive_shift(const GeneratorMatrix& A) {
  double s = 0.0;
  for (std::size_t j = 0; j < A.diag.size(); ++j) {
    s = std::max(s, std::abs(A.diag[j]) + A.up[j] + A.down[j]);
  }
  return s;
}

}  // namespace

GeneratorMatrix GibbsChain::generator() const {
  GeneratorMatrix g;
  g.k = lattice.k();
  g.up = rates_right;
  g.down = rates_left;
  g.diag.resize(rates_right.size());
  for (std::size_t j = 0; j < g.diag.size(); ++j) g.diag[j] = -(rates_right[j] + rates_left[j]);
  return g;
}

PerronData perron_solve(int k, const Potential& V, double tol, long max_iters) {
  if (!(tol > 0.0)) throw invalid_input("perron_solve needs tol > 0");
  const GeneratorMatrix A = schrodinger_matrix(k, V);
  const auto vk = restrict_potential(V, k);
  const double kk = static_cast<double>(k);
  // k(2 + max|V_k|) zeroes the smallest diagonal entry; one more k keeps the
  // shifted matrix primitive when V_k is constant.
  const double shift = kk * (3.0 + max_abs(vk.values()));

  std::vector<double> w(static_cast<std::size_t>(k), 1.0);
  std::vector<double> aw = A.apply(w);
  double lambda = dot(w, aw) / dot(w, w);
  double residual = relative_residual(aw, w, lambda);
  double entrywise = entrywise_residual(aw, w, lambda);
  long it = 0;
  while (residual > tol || !(entrywise <= tol)) {
    if (it >= max_iters) {
      throw iteration_limit("perron_solve: no convergence after " + std::to_string(it) +
                                " iterations, residual " + format_real(std::max(residual, entrywise)),
                            std::max(residual, entrywise), it);
    }
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = aw[j] + shift * w[j];
    scale_to_unit_max(w);
    aw = A.apply(w);
    // Rayleigh quotient: second-order accurate eigenvalue for a symmetric A
    lambda = dot(w, aw) / dot(w, w);
    residual = relative_residual(aw, w, lambda);
    entrywise = entrywise_residual(aw, w, lambda);
    ++it;
  }
  require_positive(w, "Perron eigenvector");

  // mu = w / sum w and u = alpha w with alpha = sum w / sum w^2, so that
  // mu is a probability vector and sum u mu = 1.
  const double sum_w = std::accumulate(w.begin(), w.end(), 0.0);
  const double alpha = sum_w / dot(w, w);
  std::vector<double> u(w.size()), mu(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    u[j] = alpha * w[j];
    mu[j] = w[j] / sum_w;
  }
  double mu_total = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (double& m : mu) m /= mu_total;

  Lattice lattice(k);
  return PerronData{k, lambda, GridFunction(lattice, std::move(u)), GridFunction(lattice, std::move(mu), true),
                    residual, it};
}

PerronData perron_solve_two_sided(const GeneratorMatrix& A, double tol, long max_iters) {
  if (!(tol > 0.0)) throw invalid_input("perron_solve_two_sided needs tol > 0");
  Lattice lattice(A.k);
  const double shift = primitive_shift(A);
  const auto n = static_cast<std::size_t>(A.k);

  std::vector<double> right(n, 1.0), left(n, 1.0);
  std::vector<double> ar = A.apply(right), al = A.apply_transpose(left);
  auto estimate = [&] { return dot(left, ar) / dot(left, right); };
  double lambda = estimate();
  double residual = std::max(relative_residual(ar, right, lambda), relative_residual(al, left, lambda));
  long it = 0;
  while (residual > tol) {
    if (it >= max_iters) {
      throw iteration_limit("perron_solve_two_sided: no convergence after " + std::to_string(it) + " iterations",
                            residual, it);
    }
    for (std::size_t j = 0; j < n; ++j) {
      right[j] = ar[j] + shift * right[j];
      left[j] = al[j] + shift * left[j];
    }
    scale_to_unit_max(right);
    scale_to_unit_max(left);
    ar = A.apply(right);
    al = A.apply_transpose(left);
    lambda = estimate();
    residual = std::max(relative_residual(ar, right, lambda), relative_residual(al, left, lambda));
    ++it;
  }
  require_positive(right, "right Perron eigenvector");
  require_positive(left, "left Perron eigenvector");

  const double sum_left = std::accumulate(left.begin(), left.end(), 0.0);
  for (double& m : left) m /= sum_left;
  const double pairing = dot(left, right);
  for (double& u : right) u /= pairing;
  return PerronData{A.k, lambda, GridFunction(lattice, std::move(right)), GridFunction(lattice, std::move(left), true),
                    residual, it};
}

double rayleigh_quotient(const GridFunction& psi, int k, const Potential& V) {
  if (psi.k() != k) throw invalid_input("rayleigh_quotient: psi lives on a different lattice");
  auto p = psi.values();
  const double kk = static_cast<double>(k);
  const double norm2 = dot(p, p) / kk;
  if (!(norm2 > 0.0)) throw invalid_input("rayleigh_quotient: psi is zero");
  auto vk = restrict_potential(V, k);
  double gradient = 0.0, potential = 0.0;
  for (int j = 0; j < k; ++j) {
    const double d = psi[j + 1] - psi[j];
    gradient += d * d;
    potential += psi[j] * psi[j] * vk[j];
  }
  return (-gradient + potential) / kk / norm2;
}

GibbsChain gibbs_generator(const PerronData& pd) {
  const int k = pd.k;
  const double kk = static_cast<double>(k);
  GibbsChain chain{Lattice(k), std::vector<double>(static_cast<std::size_t>(k)),
                   std::vector<double>(static_cast<std::size_t>(k))};
  for (int j = 0; j < k; ++j) {
    const double uj = pd.u[j];
    chain.rates_right[static_cast<std::size_t>(j)] = kk * pd.u[j + 1] / uj;
    chain.rates_left[static_cast<std::size_t>(j)] = kk * pd.u[j - 1] / uj;
  }
  return chain;
}

StationaryMeasure stationary_measure(const PerronData& pd, std::string potential_id) {
  const auto n = static_cast<std::size_t>(pd.k);
  std::vector<double> pi(n), log_pi(n);
  for (std::size_t j = 0; j < n; ++j) {
    pi[j] = pd.u.values()[j] * pd.mu.values()[j];
    log_pi[j] = std::log(pd.u.values()[j]) + std::log(pd.mu.values()[j]);
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-10) {
    throw inconsistent_eigendata("u mu sums to " + format_real(total) + ", expected 1");
  }
  for (double& p : pi) p /= total;

  const auto g = gibbs_generator(pd).generator();
  const auto flux = g.apply_transpose(pi);
  const double stationarity = max_abs(flux);
  if (stationarity > 1e-6) {
    throw inconsistent_eigendata("pi fails to be stationary for the Gibbs chain, residual " +
                                 format_real(stationarity));
  }
  return StationaryMeasure{GridFunction(pd.u.lattice(), std::move(pi), true), pd.k, std::move(potential_id),
                           std::move(log_pi), stationarity};
}

std::pair<FineGrid, FineGrid> log_profiles(const PerronData& pd, std::size_t fine_n) {
  const auto n = static_cast<std::size_t>(pd.k);
  const double kk = static_cast<double>(pd.k);
  std::vector<double> z(n), p(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = pd.u.values()[j], mu = pd.mu.values()[j];
    if (!(u > 0.0) || !(mu > 0.0)) throw domain_error("log_profiles needs strictly positive u and mu");
    z[j] = std::log(u) / kk;
    p[j] = std::log(mu) / kk;
  }
  return {extend_profile(GridFunction(pd.u.lattice(), std::move(z)), fine_n),
          extend_profile(GridFunction(pd.u.lattice(), std::move(p)), fine_n)};
}

FineGrid empirical_rate_profile(const StationaryMeasure& sm, std::size_t fine_n) {
  const double kk = static_cast<double>(sm.k);
  std::vector<double> rate(sm.log_pi.size());
  for (std::size_t j = 0; j < rate.size(); ++j) rate[j] = -sm.log_pi[j] / kk;
  const double lowest = *std::min_element(rate.begin(), rate.end());
  for (double& r : rate) r -= lowest;
  return extend_profile(GridFunction(sm.pi.lattice(), std::move(rate)), fine_n);
}

double entropy(const PerronData& pd, const StationaryMeasure& sm, int k, const Potential& V) {
  if (pd.k != k || sm.k != k) throw invalid_input("entropy: inconsistent lattice sizes");
  auto vk = restrict_potential(V, k);
  double mean = 0.0;
  for (int j = 0; j < k; ++j) mean += vk[j] * sm.pi[j];
  return static_cast<double>(k) * mean - pd.lambda;
}

}  // namespace weakkam
