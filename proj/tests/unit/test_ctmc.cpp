#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "weakkam/ctmc.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/matrix_exp.hpp"
#include "weakkam/philox.hpp"
#include "weakkam/weak_kam.hpp"

using namespace weakkam;

namespace {

struct Stats {
  double mean = 0.0, se = 0.0;
};

Stats stats(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= (n - 1.0);
  return {m, std::sqrt(v / n)};
}

double displacement(const CadlagPath& p) {
  const auto pos = p.lifted_positions();
  return pos.back() - pos.front();
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::encrypt({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::encrypt({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::encrypt({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Philox streams") {
  Philox4x32 a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  bool diff_c = false, diff_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    diff_c = diff_c || x != c();
    diff_d = diff_d || x != d();
  }
  CHECK(diff_c);
  CHECK(diff_d);
  Philox4x32 u(1, 2);
  double s = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x <= 1.0);
    s += x;
  }
  CHECK(std::abs(s / 100000 - 0.5) <= 3.0 * std::sqrt(1.0 / 12.0 / 100000));
}

TEST_CASE("walk statistics") {
  const int k = 16;
  const double T = 0.75, x0 = 0.25;
  std::vector<double> jumps, disp;
  long plus = 0, total = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const auto p = simulate_walk(k, T, x0, 99, i);
    REQUIRE(p.states.size() == p.jumps() + 1);
    REQUIRE(p.states.front() == nearest_site(x0, k));
    for (std::size_t j = 0; j < p.jumps(); ++j) {
      REQUIRE(std::abs(p.steps[j]) == 1);
      REQUIRE(p.states[j + 1] == ((p.states[j] + p.steps[j]) % k + k) % k);
      REQUIRE(p.jump_times[j] > (j ? p.jump_times[j - 1] : 0.0));
      REQUIRE(p.jump_times[j] <= T);
      plus += p.steps[j] > 0;
    }
    total += static_cast<long>(p.jumps());
    jumps.push_back(static_cast<double>(p.jumps()));
    disp.push_back(displacement(p));
  }
  const auto j = stats(jumps);
  CHECK(std::abs(j.mean - 2.0 * k * T) <= 3.0 * j.se);
  const auto d = stats(disp);
  CHECK(std::abs(d.mean) <= 3.0 * d.se);
  // +1 and -1 steps are exchangeable
  CHECK(std::abs(plus - 0.5 * total) <= 3.0 * std::sqrt(0.25 * total));

  const auto a = simulate_walk(k, T, x0, 5, 17), b = simulate_walk(k, T, x0, 5, 17);
  CHECK(a.jump_times == b.jump_times);
  CHECK(a.states == b.states);
  CHECK(a.state_at(0.0) == a.states.front());
  CHECK(a.state_at(T) == a.states.back());
  CHECK_THROWS_AS(simulate_walk(1, T, x0, 1), invalid_lattice);
  CHECK_THROWS_AS(simulate_walk(4, 0.0, x0, 1), invalid_input);
}

TEST_CASE("tilted walk") {
  const int k = 32;
  const double T = 0.5;
  std::vector<double> free_jumps, zero_jumps;
  const auto zero = TiltSchedule::constant(0.0, T);
  for (std::uint64_t i = 0; i < 10000; ++i) {
    free_jumps.push_back(static_cast<double>(simulate_walk(k, T, 0.0, 1, i).jumps()));
    zero_jumps.push_back(static_cast<double>(simulate_tilted(k, T, 0.0, zero, 2, i).jumps()));
  }
  const auto a = stats(free_jumps), b = stats(zero_jumps);
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.se, b.se));

  for (double v : {0.5, -1.0, 2.0}) {
    const auto tilt = TiltSchedule::constant(optimal_tilt(v), T);
    std::vector<double> disp;
    for (std::uint64_t i = 0; i < 10000; ++i) disp.push_back(displacement(simulate_tilted(k, T, 0.0, tilt, 3, i)));
    const auto d = stats(disp);
    CHECK(std::abs(d.mean - v * T) <= 3.0 * d.se);
  }

  // linearly varying tilt: mean displacement is the integral of the drift
  const auto ramp = TiltSchedule::from({0.0, 0.25, 0.5}, {0.0, 1.0, -0.5});
  std::vector<double> disp;
  for (std::uint64_t i = 0; i < 10000; ++i) disp.push_back(displacement(simulate_tilted(k, T, 0.0, ramp, 4, i)));
  const double drift = oracle::riemann([&](double t) { return 2.0 * std::sinh(ramp.line.at(t)); }, 0.0, T, 100000);
  const auto d = stats(disp);
  CHECK(std::abs(d.mean - drift) <= 3.0 * d.se);

  CHECK_THROWS_AS(simulate_tilted(k, 1.0, 0.0, zero, 1), invalid_input);
}

TEST_CASE("exponential martingale") {
  const int k = 32;
  const double T = 0.5;
  const auto zero = TiltSchedule::constant(0.0, T);
  for (std::uint64_t i = 0; i < 200; ++i) CHECK(exp_martingale(simulate_walk(k, T, 0.3, 8, i), zero) == 1.0);

  // jump form: sum of +-lambda(tau) minus k times the integral of H(lambda)
  const auto ramp = TiltSchedule::from({0.0, 0.2, 0.5}, {0.3, -0.4, 0.9});
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto p = simulate_walk(k, T, 0.3, 9, i);
    double jump_sum = 0.0;
    for (std::size_t j = 0; j < p.jumps(); ++j) jump_sum += p.steps[j] * ramp.line.at(p.jump_times[j]);
    const double comp = k * oracle::riemann([&](double t) { return oracle::H(ramp.line.at(t)); }, 0.0, T, 200000);
    CHECK(log_exp_martingale(p, ramp) == doctest::Approx(jump_sum - comp).epsilon(1e-9).scale(1.0));
  }

  // mean one under a time-dependent tilt, mild enough that M has a small
  // second moment and the sample SE is trustworthy
  const auto mild = TiltSchedule::from({0.0, 0.2, 0.5}, {0.1, -0.2, 0.3});
  std::vector<double> m;
  for (std::uint64_t i = 0; i < 40000; ++i) m.push_back(exp_martingale(simulate_walk(16, T, 0.0, 10, i), mild));
  const auto s = stats(m);
  CHECK(std::abs(s.mean - 1.0) <= 3.0 * s.se);

  CHECK_THROWS_AS(log_exp_martingale(simulate_walk(k, T, 0.0, 1), TiltSchedule::constant(0.5, 1.0)), invalid_input);
}

TEST_CASE("change of measure") {
  // E[M^2] = exp(k T (H(2 lambda) - 2 H(lambda))) stays near 1.4 here
  const int k = 16;
  const double T = 0.5;
  const auto tilt = TiltSchedule::constant(0.2, T);
  auto f = [&](const CadlagPath& p) { return p.states.back() < k / 2 ? 1.0 : 0.0; };
  std::vector<double> tilted, weighted;
  for (std::uint64_t i = 0; i < 40000; ++i) {
    tilted.push_back(f(simulate_tilted(k, T, 0.1, tilt, 20, i)));
    const auto p = simulate_walk(k, T, 0.1, 21, i);
    weighted.push_back(f(p) * exp_martingale(p, tilt));
  }
  const auto a = stats(tilted), b = stats(weighted);
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.se, b.se));
}

TEST_CASE("occupation integral") {
  const auto p = simulate_walk(8, 1.0, 0.0, 3, 0);
  const auto V = Potential::cosine(1.0);
  double ref = 0.0, prev = 0.0;
  for (std::size_t j = 0; j <= p.jumps(); ++j) {
    const double end = j < p.jumps() ? p.jump_times[j] : 1.0;
    ref += V(p.states[j] / 8.0) * (end - prev);
    prev = end;
  }
  CHECK(occupation_integral(p, V) == doctest::Approx(ref).epsilon(1e-14));
  CHECK(occupation_integral(p, Potential::constant(2.0)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("matrix exponential") {
  CHECK((matrix_exponential(Eigen::MatrixXd::Zero(5, 5)) - Eigen::MatrixXd::Identity(5, 5)).norm() <= 1e-15);

  Eigen::Matrix2d nil;
  nil << 0, 3, 0, 0;
  Eigen::Matrix2d expect;
  expect << 1, 3, 0, 1;
  CHECK((matrix_exponential(nil) - Eigen::MatrixXd(expect)).cwiseAbs().maxCoeff() <= 1e-14);

  std::mt19937_64 gen(4);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int n : {3, 8, 20}) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = N(gen);
    A = (0.5 * (A + A.transpose())).eval();
    for (double scale : {0.01, 1.0, 10.0}) {
      const Eigen::MatrixXd E = matrix_exponential(scale * A), R = oracle::expm_symmetric(scale * A);
      CHECK((E - R).cwiseAbs().maxCoeff() <= 1e-11 * R.cwiseAbs().maxCoeff());
    }
  }
  const auto S = oracle::schrodinger_dense(32, [](double x) { return std::cos(2.0 * oracle::pi * x); });
  const Eigen::MatrixXd E = matrix_exponential(0.5 * S), R = oracle::expm_symmetric(0.5 * S);
  CHECK((E - R).cwiseAbs().maxCoeff() <= 1e-10 * R.cwiseAbs().maxCoeff());
}

TEST_CASE("Feynman-Kac estimator") {
  const FineGrid zero{std::vector<double>(64, 0.0)};
  const auto a = feynman_kac(16, 0.5, 0.0, Potential::constant(0.0), zero, 1000, 1);
  CHECK(a.value == 0.0);
  CHECK(a.std_error == 0.0);
  const auto c = feynman_kac(16, 0.5, 0.0, Potential::constant(0.8), zero, 1000, 1);
  CHECK(c.value == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(c.std_error <= 1e-13);

  const auto V = Potential::bump(0.3, 0.1, 2.0);
  FineGrid u{std::vector<double>(256)};
  for (std::size_t i = 0; i < 256; ++i) u.values[i] = 0.2 * std::sin(2.0 * oracle::pi * u.x(i));
  const auto mc = feynman_kac(16, 0.3, 0.25, V, u, 40000, 77, 4);
  const double ex = feynman_kac_exact(16, 0.3, 0.25, V, u);
  CHECK(std::abs(mc.value - ex) <= 3.0 * mc.std_error);

  // exact value against an eigendecomposition of the same matrix
  Eigen::VectorXd eu(16);
  for (int j = 0; j < 16; ++j) eu[j] = std::exp(16.0 * u.at(j / 16.0));
  const Eigen::MatrixXd P = oracle::expm_symmetric(0.3 * oracle::schrodinger_dense(16, [&](double x) { return V(x); }));
  CHECK(ex == doctest::Approx(std::log(P.row(nearest_site(0.25, 16)).dot(eu)) / 16.0).epsilon(1e-11));

  // thread count does not change a single bit
  const auto t1 = feynman_kac(32, 0.5, 0.0, V, zero, 5000, 9, 1);
  const auto t4 = feynman_kac(32, 0.5, 0.0, V, zero, 5000, 9, 4);
  CHECK(t1.value == t4.value);
  CHECK(t1.std_error == t4.std_error);

  CHECK_THROWS_AS(feynman_kac(16, 0.5, 0.0, V, zero, 999, 1), invalid_input);
  CHECK_THROWS_AS(feynman_kac_exact(128, 0.5, 0.0, V, zero), invalid_input);
}

TEST_CASE("empirical LDP") {
  CHECK(empirical_ldp(32, Potential::constant(0.0), 0.25, 0.5) == doctest::Approx(std::log(9.0 / 32.0) / 32.0));
  CHECK_THROWS_AS(empirical_ldp(8, Potential::constant(0.0), 0.3, 0.35), invalid_input);

  const auto V = Potential::cosine(1.0);
  double prev = 1e300;
  for (int k = 32; k <= 512; k *= 2) {
    const double e = std::abs(empirical_ldp(k, V, 0.0, 0.1));
    CHECK(e < prev);
    prev = e;
  }

  const auto dev = deviation_function(V, 4096);
  double inf = 1e300;
  for (std::size_t i = 0; i < 4096; ++i)
    if (dev.values.x(i) >= 0.4 && dev.values.x(i) <= 0.6) inf = std::min(inf, dev.values.values[i]);
  double gap_prev = 1e300;
  for (int k = 64; k <= 512; k *= 2) {
    const double gap = std::abs(empirical_ldp(k, V, 0.4, 0.6) + inf);
    CHECK(gap < gap_prev);
    gap_prev = gap;
  }
}

TEST_CASE("empirical rate profile approaches the deviation function") {
  const auto V = Potential::cosine(1.0);
  const auto dev = deviation_function(V, 2048);
  auto gap = [&](int k) {
    const auto prof = empirical_rate_profile(stationary_measure(perron_solve(k, V)), 2048);
    double g = 0.0;
    for (std::size_t i = 0; i < 2048; ++i) g = std::max(g, std::abs(prof.values[i] - dev.values.values[i]));
    return g;
  };
  CHECK(gap(512) < gap(128));
}

TEST_CASE("tube distance and concentration") {
  CadlagPath p{4, 1.0, 0, 0, {0.5}, {0, 1}, {1}};
  const auto flat = PiecewisePath::from({0.0, 1.0}, {0.0, 0.0});
  CHECK(tube_distance(p, flat) == 0.25);
  const auto line = PiecewisePath::from({0.0, 1.0}, {0.0, 0.5});
  // worst at t = 1 (|0.25 - 0.5|) and just before the jump (|0 - 0.25|)
  CHECK(tube_distance(p, line) == doctest::Approx(0.25));

  const auto search = tilted_concentration_search(1.0, 0.1, 0.5, 400, 12, 8, 4096, 0.75, 4);
  REQUIRE(search.k > 0);
  CHECK(search.trace.back().second > 0.75);
  for (std::size_t i = 0; i + 1 < search.trace.size(); ++i) CHECK(search.trace[i].second <= 0.75);
}
