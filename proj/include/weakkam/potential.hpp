#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace weakkam {

enum class PotentialKind { constant, cosine, shifted_cosine, smooth_bump, tabulated };

/// A C^2 function on the circle [0,1). Evaluation accepts any real x and
/// reduces it modulo 1.
///
/// Built-in families:
///   constant        V(x) = c
///   cosine          V(x) = a cos(2 pi x)
///   shifted_cosine  V(x) = a cos(2 pi (x - phase))
///   smooth_bump     V(x) = h exp(-(1 - cos(2 pi (x - center))) / (2 pi^2 w^2))
///   tabulated       periodic cubic spline through uniformly spaced samples
///
/// The bump behaves like a Gaussian of width w near its center and is smooth
/// and periodic everywhere.
class Potential {
 public:
  static Potential constant(double value);
  static Potential cosine(double amplitude, double phase = 0.0);
  static Potential bump(double center, double width, double height);
  static Potential tabulated(std::vector<double> samples);

  /// Parses `cos(a,phase)`, `bump(center,width,height)`, `const(c)` or
  /// `table:<path>`.
  static Potential parse(std::string_view spec);

  double operator()(double x) const;

  PotentialKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }
  const std::vector<double>& samples() const;

  double max_value() const noexcept { return max_value_; }
  double min_value() const noexcept { return min_value_; }

  /// Some maximizer in [0,1); unique when unique_max() holds.
  double argmax() const noexcept { return argmax_; }
  bool unique_max() const noexcept { return unique_max_; }
  std::optional<double> unique_maximizer() const;

  bool is_constant() const noexcept { return is_constant_; }

  /// Canonical text form, parseable by parse() for non-tabulated kinds.
  const std::string& id() const noexcept { return id_; }

 private:
  struct Spline;

  Potential() = default;
  void finish_tabulated();

  PotentialKind kind_ = PotentialKind::constant;
  std::vector<double> params_;
  std::shared_ptr<const Spline> spline_;
  double max_value_ = 0.0;
  double min_value_ = 0.0;
  double argmax_ = 0.0;
  bool unique_max_ = false;
  bool is_constant_ = true;
  std::string id_;
};

/// Reduces x to [0,1).
double wrap_unit(double x) noexcept;

}  // namespace weakkam
