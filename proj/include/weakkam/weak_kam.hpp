#pragma once

#include <cstddef>
#include <vector>

#include "weakkam/lattice.hpp"
#include "weakkam/potential.hpp"

namespace weakkam {

enum class Direction { positive, negative };

/// Weak KAM solution on the uniform grid i/n, shifted to minimum 0.
/// The two branches are u_+ = Phi(., x0) and u_- = Phi(x0, .).
struct WeakKamSolution {
  FineGrid u;
  Direction sign;
  double c;
  double x0;
  std::vector<double> kink_locations;
};

struct DeviationFunction {
  FineGrid values;
  double minimizer;
};

struct LaxOleinikResult {
  FineGrid u;
  /// Some optimum sat on the edge of the velocity window, so v_max may be too small.
  bool clipped = false;
};

struct FixedPointOptions {
  double dt = 0.01;
  int velocities = 129;
  /// <= 0 selects default_velocity_bound(V).
  double v_max = 0.0;
  long max_sweeps = 200'000;
};

struct FixedPointResult {
  FineGrid u;
  double c_estimate;
  long sweeps;
  double last_change;
};

/// Aubry-Mather critical value; here max V.
double critical_value(const Potential& V);

/// Nonnegative root p of V(x) + e^p + e^-p - 2 = c, i.e. arccosh(1 + (c - V(x))/2).
double momentum(const Potential& V, double x);

/// momentum() sampled on i/n. Requires n >= 16.
FineGrid momentum_profile(const Potential& V, std::size_t n);

/// Integral of the momentum over the lifted interval [a, b], composite
/// 8-point Gauss-Legendre with about n cells per unit length, split at the
/// maximizer where the momentum has a corner.
double momentum_integral(const Potential& V, double a, double b, std::size_t n);

/// Mane potential: cheaper of the two circle arcs from x to y.
double mane_potential(double x, double y, const Potential& V, std::size_t n);

/// h(x, y) = Phi(x, x0) + Phi(x0, y). Requires a unique maximizer.
double peierls_barrier(double x, double y, const Potential& V, std::size_t n);

/// max |u'| over weak KAM solutions: arccosh(1 + (c - min V)/2).
double lipschitz_bound(const Potential& V);

/// 2 lipschitz_bound(V) + 1.
double default_velocity_bound(const Potential& V);

WeakKamSolution weak_kam_minus(const Potential& V, std::size_t n);
WeakKamSolution weak_kam_plus(const Potential& V, std::size_t n);

/// max |V(x) + H(centered difference of u) - c| over the grid, skipping
/// `exclude` points on each side of every kink.
double hj_residual(const WeakKamSolution& sol, const Potential& V, int exclude = 5);

/// Dynamic-programming Lax-Oleinik operator over time t, steps of at most
/// 0.01, m velocities uniformly spaced on [-v_max, v_max].
///
///   positive:  (T+ u)(x) = sup { u(gamma(t)) - int (L(gamma') - V(gamma)) },  gamma(0) = x
///   negative:  (T- u)(x) = inf { u(gamma(0)) + int (L(gamma') - V(gamma)) },  gamma(t) = x
///
/// so that T-_t u_- = u_- - c t and T+_t (-u_+) = -u_+ + c t.
LaxOleinikResult lax_oleinik_apply(const FineGrid& u, double t, Direction direction, const Potential& V,
                                   double v_max, int m);

/// Relative value iteration u <- T+_dt u - c dt, re-centred to max 0, until
/// successive iterates differ by at most tol. The limit is -u_+ up to a
/// constant. Throws iteration_limit.
FixedPointResult lax_oleinik_fixed_point(const Potential& V, std::size_t n, double tol,
                                         const FixedPointOptions& options = {});

/// I^V = u_+ + u_-, minimum 0 at the maximizer. Constant V gives I^V = 0.
DeviationFunction deviation_function(const Potential& V, std::size_t n);

}  // namespace weakkam
