#include "weakkam/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "weakkam/errors.hpp"
#include "weakkam/format.hpp"

namespace weakkam {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Golden-section search for a maximum of f on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double wrap_unit(double x) noexcept {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

// Periodic cubic spline on the nodes j/N: second derivatives solve the cyclic
// system M[j-1] + 4 M[j] + M[j+1] = 6 (y[j+1] - 2 y[j] + y[j-1]) / h^2.
struct Potential::Spline {
  std::vector<double> y;
  std::vector<double> m;

  explicit Spline(std::vector<double> samples) : y(std::move(samples)) {
    const std::size_t n = y.size();
    const double h = 1.0 / static_cast<double>(n);
    std::vector<double> rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
      rhs[j] = 6.0 * (y[(j + 1) % n] - 2.0 * y[j] + y[(j + n - 1) % n]) / (h * h);
    }
    m = solve_cyclic(rhs);
  }

  // Sherman-Morrison reduction of the cyclic (1,4,1) system to two tridiagonal solves.
  static std::vector<double> solve_cyclic(const std::vector<double>& rhs) {
    const std::size_t n = rhs.size();
    const double alpha = 1.0, beta = 1.0, gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] -= gamma;
    diag[n - 1] -= alpha * beta / gamma;
    auto thomas = [&](std::vector<double> r) {
      std::vector<double> c(n), d(n);
      c[0] = 1.0 / diag[0];
      d[0] = r[0] / diag[0];
      for (std::size_t i = 1; i < n; ++i) {
        double denom = diag[i] - c[i - 1];
        c[i] = 1.0 / denom;
        d[i] = (r[i] - d[i - 1]) / denom;
      }
      std::vector<double> x(n);
      x[n - 1] = d[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
      return x;
    };
    std::vector<double> x = thomas(rhs);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = alpha;
    std::vector<double> z = thomas(u);
    double fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
    return x;
  }

  double operator()(double x) const {
    const std::size_t n = y.size();
    const double h = 1.0 / static_cast<double>(n);
    double s = wrap_unit(x) * static_cast<double>(n);
    auto j = static_cast<std::size_t>(s);
    if (j >= n) j = n - 1;
    double t = s - static_cast<double>(j);
    std::size_t j1 = (j + 1) % n;
    double u = 1.0 - t;
    return u * y[j] + t * y[j1] + h * h / 6.0 * ((u * u * u - u) * m[j] + (t * t * t - t) * m[j1]);
  }
};

Potential Potential::constant(double value) {
  Potential p;
  p.kind_ = PotentialKind::constant;
  p.params_ = {value};
  p.max_value_ = p.min_value_ = value;
  p.argmax_ = 0.0;
  p.unique_max_ = false;
  p.is_constant_ = true;
  p.id_ = "const(" + format_real(value) + ")";
  return p;
}

Potential Potential::cosine(double amplitude, double phase) {
  if (!std::isfinite(amplitude) || !std::isfinite(phase)) {
    throw invalid_input("cosine potential needs finite amplitude and phase");
  }
  Potential p;
  phase = wrap_unit(phase);
  p.kind_ = phase == 0.0 ? PotentialKind::cosine : PotentialKind::shifted_cosine;
  p.params_ = {amplitude, phase};
  p.max_value_ = std::abs(amplitude);
  p.min_value_ = -std::abs(amplitude);
  p.argmax_ = amplitude >= 0.0 ? phase : wrap_unit(phase + 0.5);
  p.is_constant_ = amplitude == 0.0;
  p.unique_max_ = !p.is_constant_;
  p.id_ = "cos(" + format_real(amplitude) + "," + format_real(phase) + ")";
  return p;
}

Potential Potential::bump(double center, double width, double height) {
  if (!(width > 0.0) || !std::isfinite(center) || !std::isfinite(height)) {
    throw invalid_input("bump potential needs finite center/height and width > 0");
  }
  Potential p;
  p.kind_ = PotentialKind::smooth_bump;
  center = wrap_unit(center);
  p.params_ = {center, width, height};
  const double tail = std::exp(-1.0 / (std::numbers::pi * std::numbers::pi * width * width));
  p.max_value_ = std::max(height, height * tail);
  p.min_value_ = std::min(height, height * tail);
  p.argmax_ = height >= 0.0 ? center : wrap_unit(center + 0.5);
  p.is_constant_ = height == 0.0;
  p.unique_max_ = !p.is_constant_;
  p.id_ = "bump(" + format_real(center) + "," + format_real(width) + "," + format_real(height) + ")";
  return p;
}

Potential Potential::tabulated(std::vector<double> samples) {
  if (samples.size() < 3) throw invalid_input("tabulated potential needs at least 3 samples");
  for (double s : samples) {
    if (!std::isfinite(s)) throw invalid_input("tabulated potential has a non-finite sample");
  }
  Potential p;
  p.kind_ = PotentialKind::tabulated;
  p.spline_ = std::make_shared<const Spline>(std::move(samples));
  p.finish_tabulated();
  p.id_ = "table[" + std::to_string(p.spline_->y.size()) + "]";
  return p;
}

void Potential::finish_tabulated() {
  const auto& y = spline_->y;
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double scale = std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
  if (*hi - *lo <= 1e-14 * scale) {
    is_constant_ = true;
    unique_max_ = false;
    max_value_ = min_value_ = *hi;
    argmax_ = 0.0;
    return;
  }
  is_constant_ = false;

  const std::size_t scan = y.size() * 32;
  const double dx = 1.0 / static_cast<double>(scan);
  std::vector<double> f(scan);
  for (std::size_t i = 0; i < scan; ++i) f[i] = (*spline_)(static_cast<double>(i) * dx);

  auto imax = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
  auto imin = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  const Spline& s = *spline_;
  double xmax = golden_max(s, static_cast<double>(imax) * dx - dx, static_cast<double>(imax) * dx + dx);
  double xmin = golden_max([&](double x) { return -s(x); }, static_cast<double>(imin) * dx - dx,
                           static_cast<double>(imin) * dx + dx);
  argmax_ = wrap_unit(xmax);
  max_value_ = std::max(s(xmax), f[imax]);
  min_value_ = std::min(s(xmin), f[imin]);

  // A second, separated local maximum at the same height breaks uniqueness.
  const double tol = 1e-9 * (max_value_ - min_value_);
  unique_max_ = true;
  for (std::size_t i = 0; i < scan; ++i) {
    double prev = f[(i + scan - 1) % scan], next = f[(i + 1) % scan];
    if (f[i] >= prev && f[i] >= next && f[i] >= max_value_ - tol) {
      std::size_t d = i > imax ? i - imax : imax - i;
      d = std::min(d, scan - d);
      if (d > 2) {
        unique_max_ = false;
        break;
      }
    }
  }
}

double Potential::operator()(double x) const {
  switch (kind_) {
    case PotentialKind::constant:
      return params_[0];
    case PotentialKind::cosine:
      return params_[0] * std::cos(two_pi * x);
    case PotentialKind::shifted_cosine:
      return params_[0] * std::cos(two_pi * (x - params_[1]));
    case PotentialKind::smooth_bump: {
      const double w = params_[1];
      const double e = (1.0 - std::cos(two_pi * (x - params_[0]))) /
                       (2.0 * std::numbers::pi * std::numbers::pi * w * w);
      return params_[2] * std::exp(-e);
    }
    case PotentialKind::tabulated:
      return (*spline_)(x);
  }
  return 0.0;
}

const std::vector<double>& Potential::samples() const {
  static const std::vector<double> empty;
  return spline_ ? spline_->y : empty;
}

std::optional<double> Potential::unique_maximizer() const {
  if (!unique_max_) return std::nullopt;
  return argmax_;
}

Potential Potential::parse(std::string_view spec) {
  spec = trim(spec);
  if (spec.starts_with("table:")) {
    std::string path(trim(spec.substr(6)));
    std::ifstream in(path);
    if (!in) throw invalid_input("cannot open potential table '" + path + "'");
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
      auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      samples.push_back(parse_real(t));
    }
    return tabulated(std::move(samples));
  }
  auto open = spec.find('(');
  if (open == std::string_view::npos || spec.back() != ')') {
    throw invalid_input("malformed potential spec '" + std::string(spec) + "'");
  }
  std::string name(trim(spec.substr(0, open)));
  std::vector<double> args;
  auto inner = spec.substr(open + 1, spec.size() - open - 2);
  if (!trim(inner).empty()) {
    for (const auto& a : split(inner, ',')) args.push_back(parse_real(a));
  }
  if (name == "cos" && (args.size() == 1 || args.size() == 2)) {
    return cosine(args[0], args.size() == 2 ? args[1] : 0.0);
  }
  if (name == "bump" && args.size() == 3) return bump(args[0], args[1], args[2]);
  if (name == "const" && args.size() == 1) return constant(args[0]);
  throw invalid_input("unknown potential spec '" + std::string(spec) + "'");
}

}  // namespace weakkam
