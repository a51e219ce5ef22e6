#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "weakkam/potential.hpp"

namespace weakkam {

/// The k-site discretization {0, 1/k, ..., (k-1)/k} of the circle.
class Lattice {
 public:
  explicit Lattice(int k);

  int k() const noexcept { return k_; }
  double site(int j) const noexcept { return static_cast<double>(wrap(j)) / k_; }
  int wrap(int j) const noexcept { return ((j % k_) + k_) % k_; }

  bool operator==(const Lattice&) const = default;

 private:
  int k_;
};

/// Real values indexed by the sites of a lattice.
class GridFunction {
 public:
  GridFunction(Lattice lattice, std::vector<double> values, bool probability = false);

  const Lattice& lattice() const noexcept { return lattice_; }
  int k() const noexcept { return lattice_.k(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](int j) const noexcept { return values_[static_cast<std::size_t>(lattice_.wrap(j))]; }
  bool probability() const noexcept { return probability_; }

 private:
  Lattice lattice_;
  std::vector<double> values_;
  bool probability_;
};

/// Uniform periodic grid function on [0,1) with node i at i/n.
struct FineGrid {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) / static_cast<double>(values.size()); }
  /// Periodic piecewise-linear interpolation.
  double at(double x) const;
};

/// Circulant tridiagonal k x k matrix. Row j couples to j+1 through up[j]
/// and to j-1 through down[j] (indices mod k), so the periodic corners live
/// in up[k-1] and down[0]. When k = 2 both couplings of a row land in the
/// same column and add up.
struct GeneratorMatrix {
  int k = 0;
  std::vector<double> diag;
  std::vector<double> up;
  std::vector<double> down;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> x) const;
  double row_sum(int j) const;
  Eigen::MatrixXd to_dense() const;
};

/// L_k: diagonal -2, nearest-neighbour couplings 1, periodic. Not sped up.
GeneratorMatrix build_generator(int k);

/// values[j] = V(j/k).
GridFunction restrict_potential(const Potential& V, int k);

/// k L_k + k diag(V_k).
GeneratorMatrix schrodinger_matrix(int k, const Potential& V);

/// floor(k x) mod k for x in [0,1); other x are first reduced mod 1.
int nearest_site(double x, int k);

/// Periodic piecewise-linear extension of site values onto fine_n points.
FineGrid extend_profile(const GridFunction& f, std::size_t fine_n);

}  // namespace weakkam
