#include "weakkam/rate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakkam/errors.hpp"
#include "weakkam/format.hpp"
#include "weakkam/quadrature.hpp"

namespace weakkam {

Polyline::Polyline(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() < 2 || times_.size() != values_.size()) {
    throw invalid_input("polyline needs >= 2 breakpoints with matching values");
  }
  if (times_.front() != 0.0) throw invalid_input("polyline must start at time 0");
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i + 1] > times_[i])) throw invalid_input("polyline times must be strictly increasing");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw invalid_input("polyline values must be finite");
  }
}

std::size_t Polyline::segment_of(double t) const {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - times_.begin() - 1, 0));
  return std::min(idx, segments() - 1);
}

double Polyline::slope(std::size_t segment) const {
  return (values_[segment + 1] - values_[segment]) / (times_[segment + 1] - times_[segment]);
}

double Polyline::at(double t) const {
  std::size_t i = segment_of(t);
  return values_[i] + slope(i) * (t - times_[i]);
}

double cumulant_H(double lambda) {
  if (!(std::abs(lambda) <= 700.0)) {
    throw range_error("cumulant H overflows for lambda = " + format_real(lambda));
  }
  // 4 sinh^2(lambda/2) avoids cancellation near 0
  double s = std::sinh(0.5 * lambda);
  return 4.0 * s * s;
}

double optimal_tilt(double v) { return std::asinh(0.5 * v); }

double legendre_L(double v) {
  const double r = std::sqrt(v * v + 4.0);
  // 2 - r rewritten as -v^2 / (r + 2)
  return v * std::asinh(0.5 * v) - v * v / (r + 2.0);
}

double lagrangian(double x, double v, const Potential& V) { return -V(x) + legendre_L(v); }

double hamiltonian(double x, double p, const Potential& V) { return V(x) + cumulant_H(p); }

double path_rate(const PiecewisePath& gamma) {
  const auto& t = gamma.line.times();
  double total = 0.0;
  for (std::size_t i = 0; i < gamma.line.segments(); ++i) {
    total += (t[i + 1] - t[i]) * legendre_L(gamma.line.slope(i));
  }
  return total;
}

double action_functional(const PiecewisePath& gamma, const Potential& V, double c) {
  const auto& t = gamma.line.times();
  const auto& x = gamma.line.values();
  double total = 0.0;
  for (std::size_t i = 0; i < gamma.line.segments(); ++i) {
    const double dt = t[i + 1] - t[i];
    const double v = gamma.line.slope(i);
    double v_integral = quad::gauss_legendre8([&](double s) { return V(x[i] + v * (s - t[i])); }, t[i], t[i + 1]);
    total += dt * (legendre_L(v) + c) - v_integral;
  }
  return total;
}

}  // namespace weakkam
