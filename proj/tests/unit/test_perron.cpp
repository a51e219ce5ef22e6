#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/perron.hpp"
#include "weakkam/weak_kam.hpp"

using namespace weakkam;

namespace {

std::vector<Potential> builtins() {
  return {Potential::cosine(1.0), Potential::cosine(1.5, 0.3), Potential::bump(0.3, 0.1, 2.0),
          Potential::constant(0.4)};
}

double sup_rel(const GridFunction& u, const Eigen::VectorXd& ref) {
  double m = 0.0, scale = 0.0;
  for (int j = 0; j < u.k(); ++j) {
    m = std::max(m, std::abs(u[j] - ref[j]));
    scale = std::max(scale, std::abs(ref[j]));
  }
  return m / scale;
}

// Rescale u so its max entry is 1.
Eigen::VectorXd max_normalized(const GridFunction& u) {
  Eigen::VectorXd v(u.k());
  for (int j = 0; j < u.k(); ++j) v[j] = u[j];
  return v / v.maxCoeff();
}

}  // namespace

TEST_CASE("V = 0 gives the trivial eigenpair") {
  for (int k : {2, 4, 64, 512}) {
    const auto pd = perron_solve(k, Potential::constant(0.0));
    CHECK(std::abs(pd.lambda) <= 1e-8);
    for (int j = 0; j < k; ++j) {
      CHECK(pd.u[j] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(pd.mu[j] == doctest::Approx(1.0 / k).epsilon(1e-12));
    }
    CHECK(pd.residual <= default_perron_tol);
  }
}

TEST_CASE("constant V shifts the eigenvalue by k c") {
  for (int k : {3, 16, 100}) {
    const auto pd = perron_solve(k, Potential::constant(0.75));
    CHECK(pd.lambda == doctest::Approx(0.75 * k).epsilon(1e-12));
    for (int j = 0; j < k; ++j) CHECK(pd.u[j] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("k = 4 with a single spike matches the dense eigensolve") {
  const auto V = Potential::tabulated({1.0, 0.0, 0.0, 0.0});
  const auto pd = perron_solve(4, V);
  const auto ref = oracle::top_eigen(oracle::schrodinger_dense(4, [&](double x) { return V(x); }));
  CHECK(pd.lambda == doctest::Approx(ref.value).epsilon(1e-12));
  CHECK(sup_rel(GridFunction(Lattice(4), {pd.u[0], pd.u[1], pd.u[2], pd.u[3]}), ref.vector * pd.u[0]) <= 1e-9);
}

TEST_CASE("eigen-data invariants across built-ins") {
  for (const auto& V : builtins())
    for (int k = 4; k <= 512; k *= 2) {
      const auto pd = perron_solve(k, V);
      const auto A = schrodinger_matrix(k, V);
      std::vector<double> u(pd.u.values().begin(), pd.u.values().end());
      std::vector<double> mu(pd.mu.values().begin(), pd.mu.values().end());
      const auto au = A.apply(u), atm = A.apply_transpose(mu);
      double umax = 0.0, res = 0.0, lres = 0.0, sum_mu = 0.0, dot = 0.0, vmax = -1e300;
      for (int j = 0; j < k; ++j) {
        umax = std::max(umax, u[j]);
        res = std::max(res, std::abs(au[j] - pd.lambda * u[j]));
        lres = std::max(lres, std::abs(atm[j] - pd.lambda * mu[j]));
        sum_mu += mu[j];
        dot += u[j] * mu[j];
        vmax = std::max(vmax, V(static_cast<double>(j) / k));
        REQUIRE(u[j] > 0.0);
        REQUIRE(mu[j] >= 0.0);
      }
      CHECK(res / umax <= default_perron_tol);
      CHECK(lres <= 1e-9 * k);
      CHECK(sum_mu == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(dot - 1.0) <= 1e-10);
      CHECK(pd.lambda / k <= vmax + 1e-9);
    }
}

TEST_CASE("power iteration agrees with the dense eigensolve for k <= 64") {
  for (const auto& V : builtins())
    for (int k : {2, 3, 5, 8, 13, 32, 64}) {
      const auto pd = perron_solve(k, V);
      const auto ref = oracle::top_eigen(oracle::schrodinger_dense(k, [&](double x) { return V(x); }));
      CHECK(std::abs(pd.lambda - ref.value) <= 1e-8);
      const auto mine = max_normalized(pd.u);
      CHECK((mine - ref.vector).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("two-sided iteration reproduces the symmetric normalization") {
  const auto V = Potential::bump(0.3, 0.1, 2.0);
  for (int k : {8, 64}) {
    const auto a = perron_solve(k, V);
    const auto b = perron_solve_two_sided(schrodinger_matrix(k, V));
    CHECK(a.lambda == doctest::Approx(b.lambda).epsilon(1e-10));
    for (int j = 0; j < k; ++j) {
      CHECK(a.u[j] == doctest::Approx(b.u[j]).epsilon(1e-7));
      CHECK(a.mu[j] == doctest::Approx(b.mu[j]).epsilon(1e-7));
    }
  }
}

TEST_CASE("iteration limit is reported") {
  try {
    (void)perron_solve(64, Potential::cosine(1.0), 1e-14, 3);
    FAIL("expected iteration_limit");
  } catch (const iteration_limit& e) {
    CHECK(e.iterations() == 3);
    CHECK(e.last_residual() > 0.0);
  }
  CHECK_THROWS_AS(perron_solve(1, Potential::cosine(1.0)), invalid_lattice);
}

TEST_CASE("Rayleigh quotient") {
  const Lattice lat(16);
  const GridFunction ones(lat, std::vector<double>(16, 1.0));
  CHECK(rayleigh_quotient(ones, 16, Potential::constant(0.0)) == 0.0);
  CHECK(std::abs(rayleigh_quotient(ones, 16, Potential::cosine(1.0))) <= 1e-15);

  const auto V = Potential::cosine(1.0);
  for (int k : {8, 64, 256}) {
    const auto pd = perron_solve(k, V);
    const auto sm = stationary_measure(pd);
    std::vector<double> root_pi(static_cast<std::size_t>(k)), root_u(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      root_pi[j] = std::sqrt(sm.pi[j]);
      root_u[j] = std::sqrt(pd.u[j]);
    }
    // sqrt(pi) is proportional to u and attains the maximum
    const double at_max = rayleigh_quotient(GridFunction(Lattice(k), root_pi), k, V);
    CHECK(std::abs(at_max - pd.lambda / k) <= 1e-6);
    // any other test function stays below
    CHECK(rayleigh_quotient(GridFunction(Lattice(k), root_u), k, V) <= pd.lambda / k + 1e-12);
  }
}

TEST_CASE("Gibbs chain") {
  const auto flat = gibbs_generator(perron_solve(8, Potential::constant(0.0)));
  for (int j = 0; j < 8; ++j) {
    CHECK(flat.rates_right[j] == doctest::Approx(8.0));
    CHECK(flat.rates_left[j] == doctest::Approx(8.0));
  }

  for (const auto& V : builtins()) {
    const auto pd = perron_solve(32, V);
    const auto G = gibbs_generator(pd).generator();
    for (int j = 0; j < 32; ++j) CHECK(std::abs(G.row_sum(j)) <= 1e-10);
  }

  // Doob conjugation done directly on the dense matrix
  for (int k : {4, 16}) {
    const auto V = k == 4 ? Potential::tabulated({1.0, 0.0, 0.0, 0.0}) : Potential::bump(0.3, 0.1, 2.0);
    const auto pd = perron_solve(k, V);
    Eigen::VectorXd u(k);
    for (int j = 0; j < k; ++j) u[j] = pd.u[j];
    const Eigen::MatrixXd A = oracle::schrodinger_dense(k, [&](double x) { return V(x); }) -
                              pd.lambda * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd conj = u.cwiseInverse().asDiagonal() * A * u.asDiagonal();
    const Eigen::MatrixXd G = gibbs_generator(pd).generator().to_dense();
    CHECK((conj - G).cwiseAbs().maxCoeff() <= 1e-10 * k);
  }
}

TEST_CASE("stationary measure") {
  const auto flat = stationary_measure(perron_solve(10, Potential::constant(0.0)));
  for (int j = 0; j < 10; ++j) CHECK(flat.pi[j] == doctest::Approx(0.1).epsilon(1e-12));

  for (const auto& V : builtins())
    for (int k : {16, 128}) {
      const auto pd = perron_solve(k, V);
      const auto sm = stationary_measure(pd, V.id());
      double su = 0.0;
      for (int j = 0; j < k; ++j) su += pd.u[j];
      for (int j = 0; j < k; ++j) CHECK(std::abs(sm.pi[j] - pd.u[j] * pd.u[j] / su) <= 1e-10);
      CHECK(sm.stationarity_residual <= 1e-8);
      // pi^T G = 0 computed independently
      const auto G = gibbs_generator(pd).generator().to_dense();
      Eigen::VectorXd p(k);
      for (int j = 0; j < k; ++j) p[j] = sm.pi[j];
      CHECK((G.transpose() * p).cwiseAbs().maxCoeff() <= 1e-8);
      CHECK(sm.potential_id == V.id());
    }

  for (int k : {32, 64, 128, 256}) {
    const auto sm = stationary_measure(perron_solve(k, Potential::cosine(1.0)));
    int arg = 0;
    for (int j = 1; j < k; ++j)
      if (sm.pi[j] > sm.pi[arg]) arg = j;
    CHECK(arg == nearest_site(0.0, k));
  }
}

TEST_CASE("log profiles") {
  const auto [z0, p0] = log_profiles(perron_solve(16, Potential::constant(0.0)), 64);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(std::abs(z0.values[i]) <= 1e-13);
    CHECK(p0.values[i] == doctest::Approx(-std::log(16.0) / 16.0).epsilon(1e-12));
  }

  const auto V = Potential::cosine(1.0);
  const std::size_t n = 2048;
  const auto dev = deviation_function(V, n);
  std::vector<FineGrid> zs;
  std::vector<double> gaps;
  for (int k = 64; k <= 512; k *= 2) {
    const auto [z, p] = log_profiles(perron_solve(k, V), n);
    zs.push_back(z);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = z.values[i] + p.values[i];
    const double top = *std::max_element(s.begin(), s.end());
    double gap = 0.0;
    for (std::size_t i = 0; i < n; ++i) gap = std::max(gap, std::abs((s[i] - top) + dev.values.values[i]));
    gaps.push_back(gap);
  }
  // z-profiles (re-centred) form a Cauchy sequence
  auto centred_diff = [&](const FineGrid& a, const FineGrid& b) {
    const double sa = *std::max_element(a.values.begin(), a.values.end());
    const double sb = *std::max_element(b.values.begin(), b.values.end());
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs((a.values[i] - sa) - (b.values[i] - sb)));
    return m;
  };
  for (std::size_t i = 2; i < zs.size(); ++i) CHECK(centred_diff(zs[i], zs[i - 1]) < centred_diff(zs[i - 1], zs[i - 2]));
  for (std::size_t i = 1; i < gaps.size(); ++i) CHECK(gaps[i] < gaps[i - 1]);
}

TEST_CASE("entropy") {
  for (double c : {0.0, 0.6}) {
    const auto pd = perron_solve(32, Potential::constant(c));
    CHECK(std::abs(entropy(pd, stationary_measure(pd), 32, Potential::constant(c))) <= 1e-8);
  }
  const auto V = Potential::cosine(1.0);
  double prev = 1e300;
  for (int k = 64; k <= 512; k *= 2) {
    const auto pd = perron_solve(k, V);
    const auto sm = stationary_measure(pd);
    const double e = entropy(pd, sm, k, V);
    CHECK(std::abs(e / k) < prev);
    prev = std::abs(e / k);
    if (k == 64) {
      // same quantity from the dense eigensolve
      const auto ref = oracle::top_eigen(oracle::schrodinger_dense(k, [&](double x) { return V(x); }));
      const Eigen::VectorXd pi = ref.vector.array().square() / ref.vector.squaredNorm();
      double mean = 0.0;
      for (int j = 0; j < k; ++j) mean += V(static_cast<double>(j) / k) * pi[j];
      CHECK(e == doctest::Approx(k * mean - ref.value).epsilon(1e-7));
    }
  }
  CHECK(prev < 0.05);
}
