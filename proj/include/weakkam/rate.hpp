#pragma once

#include <vector>

#include "weakkam/potential.hpp"

namespace weakkam {

/// Continuous piecewise-linear function on [0, T] given by breakpoints.
class Polyline {
 public:
  Polyline(std::vector<double> times, std::vector<double> values);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double horizon() const noexcept { return times_.back(); }
  std::size_t segments() const noexcept { return times_.size() - 1; }

  double at(double t) const;
  double slope(std::size_t segment) const;
  std::size_t segment_of(double t) const;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// A path on the circle carried by its lift to the real line, so slopes
/// across the seam are unambiguous.
struct PiecewisePath {
  Polyline line;

  static PiecewisePath from(std::vector<double> times, std::vector<double> positions) {
    return {Polyline(std::move(times), std::move(positions))};
  }
  double T() const noexcept { return line.horizon(); }
};

/// Time-dependent tilt lambda(t), piecewise linear.
struct TiltSchedule {
  Polyline line;

  static TiltSchedule constant(double lambda, double T) { return {Polyline({0.0, T}, {lambda, lambda})}; }
  static TiltSchedule from(std::vector<double> times, std::vector<double> lambdas) {
    return {Polyline(std::move(times), std::move(lambdas))};
  }
  double T() const noexcept { return line.horizon(); }
};

/// H(lambda) = e^lambda + e^-lambda - 2. Throws range_error for |lambda| > 700.
double cumulant_H(double lambda);

/// Legendre transform of H:
/// L(v) = v log((v + sqrt(v^2+4))/2) - sqrt(v^2+4) + 2.
double legendre_L(double v);

/// The maximizing tilt log((v + sqrt(v^2+4))/2); satisfies H'(tilt) = v.
double optimal_tilt(double v);

/// L^V(x, v) = -V(x) + L(v).
double lagrangian(double x, double v, const Potential& V);

/// H(x, p) = V(x) + e^p + e^-p - 2, the convex dual of the Lagrangian in v.
double hamiltonian(double x, double p, const Potential& V);

/// I_T(gamma) = integral of L(gamma'); exact since gamma' is piecewise constant.
double path_rate(const PiecewisePath& gamma);

/// Integral of L^V(gamma, gamma') + c over [0, T], Gauss-Legendre per segment.
double action_functional(const PiecewisePath& gamma, const Potential& V, double c);

}  // namespace weakkam
