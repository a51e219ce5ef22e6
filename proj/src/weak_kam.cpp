#include "weakkam/weak_kam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "weakkam/errors.hpp"
#include "weakkam/format.hpp"
#include "weakkam/quadrature.hpp"
#include "weakkam/rate.hpp"

namespace weakkam {

namespace {

void require_unique_max(const Potential& V, const char* op) {
  if (!V.unique_max()) {
    throw unsupported_configuration(std::string(op) + " needs a potential with a unique maximizer; '" + V.id() +
                                    "' has several");
  }
}

// Cumulative momentum integral from x0 through the grid points i/n, walking
// forward (increasing lifted coordinate) or backward around the circle.
struct ArcTable {
  std::vector<double> from_x0;  // indexed by grid point
  double total = 0.0;
};

ArcTable accumulate_arcs(const Potential& V, std::size_t n, double x0, bool forward) {
  auto g = [&](double s) { return momentum(V, s); };
  const double dn = static_cast<double>(n);
  ArcTable table;
  table.from_x0.assign(n, 0.0);
  const auto first = static_cast<std::size_t>(std::ceil(x0 * dn)) % n;
  double acc = 0.0;
  if (forward) {
    double prev = x0;
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t i = (first + step) % n;
      double p = static_cast<double>(i) / dn;
      if (p < x0) p += 1.0;
      acc += quad::gauss_legendre8(g, prev, p);
      table.from_x0[i] = acc;
      prev = p;
    }
    table.total = acc + quad::gauss_legendre8(g, prev, x0 + 1.0);
  } else {
    double prev = x0 + 1.0;
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t i = (first + n - 1 - step) % n;
      double p = static_cast<double>(i) / dn;
      if (p < x0) p += 1.0;
      acc += quad::gauss_legendre8(g, p, prev);
      table.from_x0[i] = acc;
      prev = p;
    }
    table.total = acc + quad::gauss_legendre8(g, x0, prev);
  }
  // the node sitting exactly on x0 has zero arc in both directions
  if (static_cast<double>(first) / dn == x0) table.from_x0[first] = forward ? 0.0 : table.total;
  return table;
}

// The point where both arcs from x0 carry half the total momentum.
double cut_point(const Potential& V, double x0, double total, std::size_t n) {
  auto g = [&](double s) { return momentum(V, s); };
  const double half = 0.5 * total;
  double lo = x0, hi = x0 + 1.0, acc_lo = 0.0;
  // coarse scan in steps of 1/n, then bisection inside the bracketing cell
  const double step = 1.0 / static_cast<double>(n);
  while (lo + step < hi) {
    double next = quad::gauss_legendre8(g, lo, lo + step);
    if (acc_lo + next >= half) break;
    acc_lo += next;
    lo += step;
  }
  double a = lo, b = std::min(lo + step, x0 + 1.0);
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    double mid = 0.5 * (a + b);
    if (acc_lo + quad::gauss_legendre8(g, lo, mid) >= half) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return wrap_unit(0.5 * (a + b));
}

WeakKamSolution weak_kam_branch(const Potential& V, std::size_t n, Direction sign) {
  if (n < 16) throw invalid_resolution("weak KAM grid needs n >= 16");
  const double c = critical_value(V);
  if (V.is_constant()) {
    return WeakKamSolution{FineGrid{std::vector<double>(n, 0.0)}, sign, c, V.argmax(), {}};
  }
  require_unique_max(V, sign == Direction::negative ? "weak_kam_minus" : "weak_kam_plus");
  const double x0 = V.argmax();
  // u_- integrates outward from x0, u_+ inward towards it; by the evenness of
  // the Lagrangian in v both reduce to arcs of the same momentum density.
  ArcTable arcs = accumulate_arcs(V, n, x0, sign == Direction::negative);
  FineGrid u{std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double a = arcs.from_x0[i];
    u.values[i] = std::max(0.0, std::min(a, arcs.total - a));
  }
  return WeakKamSolution{std::move(u), sign, c, x0, {cut_point(V, x0, arcs.total, n)}};
}

// Precomputed semi-Lagrangian stencil for one DP step of length dt.
class LaxOleinikStepper {
 public:
  LaxOleinikStepper(const Potential& V, std::size_t n, double dt, double v_max, int m)
      : n_(n), m_(static_cast<std::size_t>(m)), offset_(m_), frac_(m_), cost_(m_ * n) {
    if (m < 3) throw invalid_input("Lax-Oleinik needs at least 3 velocity samples");
    if (!(v_max > 0.0)) throw invalid_input("Lax-Oleinik needs v_max > 0");
    const double dn = static_cast<double>(n);
    for (std::size_t l = 0; l < m_; ++l) {
      const double v = -v_max + 2.0 * v_max * static_cast<double>(l) / static_cast<double>(m_ - 1);
      const double disp = v * dt * dn;
      const double q = std::floor(disp);
      offset_[l] = static_cast<long>(q);
      frac_[l] = disp - q;
      const double lv = legendre_L(v);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / dn;
        const double y = x + v * dt;
        // Simpson average of V along the straight segment
        const double vbar = (V(x) + 4.0 * V(0.5 * (x + y)) + V(y)) / 6.0;
        cost_[l * n + i] = dt * (lv - vbar);
      }
    }
  }

  // One step; returns whether an optimum used an extreme velocity.
  bool step(const std::vector<double>& u, std::vector<double>& out, Direction dir) const {
    bool clipped = false;
    const auto n = static_cast<long>(n_);
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      double best = dir == Direction::positive ? -std::numeric_limits<double>::infinity()
                                               : std::numeric_limits<double>::infinity();
      std::size_t best_l = 0;
      for (std::size_t l = 0; l < m_; ++l) {
        long j = (static_cast<long>(i) + offset_[l]) % n;
        if (j < 0) j += n;
        const long j1 = j + 1 == n ? 0 : j + 1;
        const double f = frac_[l];
        const double ui = (1.0 - f) * u[static_cast<std::size_t>(j)] + f * u[static_cast<std::size_t>(j1)];
        const double cost = cost_[l * n_ + i];
        if (dir == Direction::positive) {
          const double cand = ui - cost;
          if (cand > best) {
            best = cand;
            best_l = l;
          }
        } else {
          const double cand = ui + cost;
          if (cand < best) {
            best = cand;
            best_l = l;
          }
        }
      }
      out[i] = best;
      if (best_l == 0 || best_l == m_ - 1) clipped = true;
    }
    return clipped;
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<long> offset_;
  std::vector<double> frac_;
  std::vector<double> cost_;
};

}  // namespace

double critical_value(const Potential& V) { return V.max_value(); }

double momentum(const Potential& V, double x) {
  const double c = V.max_value();
  double d = c - V(x);
  const double guard = 1e-10 * std::max(1.0, std::abs(c) + std::abs(V.min_value()));
  if (d < -guard) {
    throw domain_error("momentum: V(x) exceeds the critical value at x = " + format_real(x));
  }
  d = std::max(d, 0.0);
  // arccosh(1 + d/2) = 2 asinh(sqrt(d)/2), accurate as d -> 0
  return 2.0 * std::asinh(0.5 * std::sqrt(d));
}

FineGrid momentum_profile(const Potential& V, std::size_t n) {
  if (n < 16) throw invalid_resolution("momentum_profile needs n >= 16");
  FineGrid g{std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) g.values[i] = momentum(V, g.x(i));
  return g;
}

double momentum_integral(const Potential& V, double a, double b, std::size_t n) {
  if (b < a) throw invalid_input("momentum_integral needs a <= b");
  if (b == a) return 0.0;
  if (n == 0) throw invalid_resolution("momentum_integral needs n > 0");
  auto g = [&](double s) { return momentum(V, s); };
  // break points: lifts of the maximizer strictly inside (a, b)
  std::vector<double> cuts{a};
  const double x0 = V.argmax();
  for (double lift = std::ceil(a - x0) + x0; lift < b; lift += 1.0) {
    if (lift > a) cuts.push_back(lift);
  }
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    const auto cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) * static_cast<double>(n))));
    const double h = (hi - lo) / static_cast<double>(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const double from = lo + h * static_cast<double>(c);
      const double to = c + 1 == cells ? hi : from + h;
      total += quad::gauss_legendre8(g, from, to);
    }
  }
  return total;
}

double mane_potential(double x, double y, const Potential& V, std::size_t n) {
  x = wrap_unit(x);
  y = wrap_unit(y);
  if (x == y) return 0.0;
  const double y_lift = y > x ? y : y + 1.0;
  const double forward = momentum_integral(V, x, y_lift, n);
  const double backward = momentum_integral(V, y_lift, x + 1.0, n);
  return std::min(forward, backward);
}

double peierls_barrier(double x, double y, const Potential& V, std::size_t n) {
  require_unique_max(V, "peierls_barrier");
  const double x0 = V.argmax();
  return mane_potential(x, x0, V, n) + mane_potential(x0, y, V, n);
}

double lipschitz_bound(const Potential& V) {
  const double d = V.max_value() - V.min_value();
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(d, 0.0)));
}

double default_velocity_bound(const Potential& V) { return 2.0 * lipschitz_bound(V) + 1.0; }

WeakKamSolution weak_kam_minus(const Potential& V, std::size_t n) {
  return weak_kam_branch(V, n, Direction::negative);
}

WeakKamSolution weak_kam_plus(const Potential& V, std::size_t n) {
  return weak_kam_branch(V, n, Direction::positive);
}

double hj_residual(const WeakKamSolution& sol, const Potential& V, int exclude) {
  const std::size_t n = sol.u.size();
  const double h = 1.0 / static_cast<double>(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = sol.u.x(i);
    bool skip = false;
    for (double kink : sol.kink_locations) {
      double d = std::abs(x - kink);
      d = std::min(d, 1.0 - d);
      if (d <= static_cast<double>(exclude) * h) skip = true;
    }
    if (skip) continue;
    const double p = (sol.u.values[(i + 1) % n] - sol.u.values[(i + n - 1) % n]) / (2.0 * h);
    worst = std::max(worst, std::abs(hamiltonian(x, p, V) - sol.c));
  }
  return worst;
}

LaxOleinikResult lax_oleinik_apply(const FineGrid& u, double t, Direction direction, const Potential& V,
                                   double v_max, int m) {
  if (!(t > 0.0)) throw invalid_input("lax_oleinik_apply needs t > 0");
  if (u.size() < 2) throw invalid_resolution("lax_oleinik_apply needs at least 2 grid points");
  const double steps = std::ceil(t / 0.01 - 1e-12);
  const double dt = t / steps;
  LaxOleinikStepper stepper(V, u.size(), dt, v_max, m);
  LaxOleinikResult result{u, false};
  std::vector<double> next;
  for (long s = 0; s < static_cast<long>(steps); ++s) {
    result.clipped |= stepper.step(result.u.values, next, direction);
    result.u.values.swap(next);
  }
  return result;
}

FixedPointResult lax_oleinik_fixed_point(const Potential& V, std::size_t n, double tol,
                                         const FixedPointOptions& options) {
  if (!(tol > 0.0)) throw invalid_input("lax_oleinik_fixed_point needs tol > 0");
  if (n < 16) throw invalid_resolution("lax_oleinik_fixed_point needs n >= 16");
  const double v_max = options.v_max > 0.0 ? options.v_max : default_velocity_bound(V);
  const double dt = options.dt;
  LaxOleinikStepper stepper(V, n, dt, v_max, options.velocities);

  std::vector<double> u(n, 0.0), next;
  double c_est = 0.0, change = std::numeric_limits<double>::infinity();
  long sweep = 0;
  while (change > tol) {
    if (sweep >= options.max_sweeps) {
      throw iteration_limit("lax_oleinik_fixed_point: no convergence after " + std::to_string(sweep) +
                                " sweeps, last change " + format_real(change) + ", c estimate " +
                                format_real(c_est),
                            change, sweep);
    }
    stepper.step(u, next, Direction::positive);
    double increment = 0.0;
    for (std::size_t i = 0; i < n; ++i) increment += next[i] - u[i];
    c_est = increment / static_cast<double>(n) / dt;
    const double top = *std::max_element(next.begin(), next.end());
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] -= top;
      change = std::max(change, std::abs(next[i] - u[i]));
    }
    u.swap(next);
    ++sweep;
  }
  return FixedPointResult{FineGrid{std::move(u)}, c_est, sweep, change};
}

DeviationFunction deviation_function(const Potential& V, std::size_t n) {
  const auto plus = weak_kam_plus(V, n);
  const auto minus = weak_kam_minus(V, n);
  FineGrid values{std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) values.values[i] = plus.u.values[i] + minus.u.values[i];
  const double lowest = *std::min_element(values.values.begin(), values.values.end());
  for (double& v : values.values) v -= lowest;
  return DeviationFunction{std::move(values), V.is_constant() ? 0.0 : V.argmax()};
}

}  // namespace weakkam
