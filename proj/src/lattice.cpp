#include "weakkam/lattice.hpp"

#include <cmath>
#include <string>

#include "weakkam/errors.hpp"

namespace weakkam {

Lattice::Lattice(int k) : k_(k) {
  if (k < 2) throw invalid_lattice("lattice needs k >= 2, got " + std::to_string(k));
}

GridFunction::GridFunction(Lattice lattice, std::vector<double> values, bool probability)
    : lattice_(lattice), values_(std::move(values)), probability_(probability) {
  if (values_.size() != static_cast<std::size_t>(lattice_.k())) {
    throw invalid_input("grid function length " + std::to_string(values_.size()) +
                        " does not match k = " + std::to_string(lattice_.k()));
  }
  if (probability_) {
    double total = 0.0;
    for (double v : values_) {
      if (!(v >= 0.0)) throw invalid_input("probability grid function has a negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw invalid_input("probability grid function does not sum to 1");
  }
}

double FineGrid::at(double x) const {
  const std::size_t n = values.size();
  double s = wrap_unit(x) * static_cast<double>(n);
  auto i = static_cast<std::size_t>(s);
  if (i >= n) i = n - 1;
  double t = s - static_cast<double>(i);
  return (1.0 - t) * values[i] + t * values[(i + 1) % n];
}

std::vector<double> GeneratorMatrix::apply(std::span<const double> x) const {
  const auto n = static_cast<std::size_t>(k);
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t r = j + 1 == n ? 0 : j + 1;
    std::size_t l = j == 0 ? n - 1 : j - 1;
    y[j] = diag[j] * x[j] + up[j] * x[r] + down[j] * x[l];
  }
  return y;
}

std::vector<double> GeneratorMatrix::apply_transpose(std::span<const double> x) const {
  const auto n = static_cast<std::size_t>(k);
  std::vector<double> y(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t r = j + 1 == n ? 0 : j + 1;
    std::size_t l = j == 0 ? n - 1 : j - 1;
    // column j collects up[] from row j-1 and down[] from row j+1
    y[j] = diag[j] * x[j] + up[l] * x[l] + down[r] * x[r];
  }
  return y;
}

double GeneratorMatrix::row_sum(int j) const {
  auto i = static_cast<std::size_t>(j);
  return diag[i] + up[i] + down[i];
}

Eigen::MatrixXd GeneratorMatrix::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    a(j, j) += diag[static_cast<std::size_t>(j)];
    a(j, (j + 1) % k) += up[static_cast<std::size_t>(j)];
    a(j, (j + k - 1) % k) += down[static_cast<std::size_t>(j)];
  }
  return a;
}

GeneratorMatrix build_generator(int k) {
  Lattice lattice(k);
  const auto n = static_cast<std::size_t>(lattice.k());
  return GeneratorMatrix{k, std::vector<double>(n, -2.0), std::vector<double>(n, 1.0),
                         std::vector<double>(n, 1.0)};
}

GridFunction restrict_potential(const Potential& V, int k) {
  Lattice lattice(k);
  std::vector<double> values(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) values[static_cast<std::size_t>(j)] = V(lattice.site(j));
  return GridFunction(lattice, std::move(values));
}

GeneratorMatrix schrodinger_matrix(int k, const Potential& V) {
  GeneratorMatrix m = build_generator(k);
  const double kk = static_cast<double>(k);
  auto vk = restrict_potential(V, k);
  for (std::size_t j = 0; j < m.diag.size(); ++j) {
    m.diag[j] = kk * m.diag[j] + kk * vk.values()[j];
    m.up[j] *= kk;
    m.down[j] *= kk;
  }
  return m;
}

int nearest_site(double x, int k) {
  Lattice lattice(k);
  auto j = static_cast<long>(std::floor(static_cast<double>(k) * wrap_unit(x)));
  return lattice.wrap(static_cast<int>(j));
}

FineGrid extend_profile(const GridFunction& f, std::size_t fine_n) {
  const auto k = static_cast<std::size_t>(f.k());
  if (fine_n < k) {
    throw invalid_resolution("fine grid of " + std::to_string(fine_n) + " points is coarser than k = " +
                             std::to_string(k));
  }
  FineGrid out;
  out.values.resize(fine_n);
  auto v = f.values();
  for (std::size_t i = 0; i < fine_n; ++i) {
    // exact integer arithmetic keeps the nodes that coincide with sites exact
    std::size_t num = i * k;
    std::size_t j = num / fine_n;
    double t = static_cast<double>(num % fine_n) / static_cast<double>(fine_n);
    out.values[i] = t == 0.0 ? v[j] : (1.0 - t) * v[j] + t * v[(j + 1) % k];
  }
  return out;
}

}  // namespace weakkam
