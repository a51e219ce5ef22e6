#include "weakkam/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "weakkam/convergence.hpp"
#include "weakkam/ctmc.hpp"
#include "weakkam/errors.hpp"
#include "weakkam/io.hpp"
#include "weakkam/perron.hpp"
#include "weakkam/rate.hpp"
#include "weakkam/weak_kam.hpp"

namespace weakkam {

namespace fs = std::filesystem;
using nlohmann::json;

double numeric_legendre(double v) {
  auto f = [v](double l) { return l * v - cumulant_H(l); };
  double best = -30.0, fbest = f(best);
  for (int i = -3000; i <= 3000; ++i) {
    const double l = i * 0.01;
    if (const double fl = f(l); fl > fbest) {
      best = l;
      fbest = fl;
    }
  }
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best - 0.01, b = best + 0.01;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return std::max({fbest, fc, fd, f(0.5 * (a + b))});
}

namespace {

int cmd_perron(const RunConfig& cfg, const fs::path& dir) {
  const auto V = Potential::parse(cfg.potential);
  CsvWriter summary(dir / "perron.csv", {"k", "lambda", "lambda_over_k", "residual", "iterations"});
  json rows = json::array();
  for (int k : cfg.k_list) {
    const auto pd = perron_solve(k, V, cfg.tol("perron"));
    const auto sm = stationary_measure(pd, V.id());
    summary.cell(k).cell(pd.lambda).cell(pd.lambda / k).cell(pd.residual).cell(pd.iterations);
    summary.end_row();
    rows.push_back({{"k", k},
                    {"lambda", pd.lambda},
                    {"lambda_over_k", pd.lambda / k},
                    {"residual", pd.residual},
                    {"iterations", pd.iterations},
                    {"stationarity_residual", sm.stationarity_residual}});
    CsvWriter prof(dir / ("perron_k" + std::to_string(k) + ".csv"), {"j", "x", "u", "mu", "pi", "log_pi"});
    for (int j = 0; j < k; ++j) {
      prof.cell(j).cell(static_cast<double>(j) / k).cell(pd.u[j]).cell(pd.mu[j]).cell(sm.pi[j]).cell(sm.log_pi[j]);
      prof.end_row();
    }
  }
  write_json(dir / "perron.json", {{"potential", cfg.potential}, {"rows", rows}});
  return 0;
}

int cmd_weakkam(const RunConfig& cfg, const fs::path& dir, const CommandOptions& opt) {
  const auto V = Potential::parse(cfg.potential);
  const std::size_t n = cfg.n_grid;
  const auto plus = weak_kam_plus(V, n);
  const auto minus = weak_kam_minus(V, n);
  const auto dev = deviation_function(V, n);
  const auto p = momentum_profile(V, n);
  std::vector<std::string> header{"x", "u_plus", "u_minus", "deviation", "momentum"};
  FineGrid fp;
  json doc{{"potential", cfg.potential},
           {"n_grid", n},
           {"c", plus.c},
           {"x0", plus.x0},
           {"hj_residual_plus", hj_residual(plus, V)},
           {"hj_residual_minus", hj_residual(minus, V)},
           {"kinks_plus", plus.kink_locations},
           {"kinks_minus", minus.kink_locations}};
  if (opt.fixed_point) {
    const auto res = lax_oleinik_fixed_point(V, n, cfg.tol("fixed_point"));
    fp.values.resize(n);
    const double mx = *std::max_element(res.u.values.begin(), res.u.values.end());
    for (std::size_t i = 0; i < n; ++i) fp.values[i] = mx - res.u.values[i];
    header.push_back("fixed_point_u_plus");
    doc["fixed_point"] = {{"c_estimate", res.c_estimate}, {"sweeps", res.sweeps}, {"last_change", res.last_change}};
  }
  CsvWriter csv(dir / "weakkam.csv", header);
  for (std::size_t i = 0; i < n; ++i) {
    csv.cell(plus.u.x(i)).cell(plus.u.values[i]).cell(minus.u.values[i]).cell(dev.values.values[i]).cell(p.values[i]);
    if (opt.fixed_point) csv.cell(fp.values[i]);
    csv.end_row();
  }
  write_json(dir / "weakkam.json", doc);
  return 0;
}

int cmd_rate(const RunConfig& cfg, const fs::path& dir) {
  const auto V = Potential::parse(cfg.potential);
  CsvWriter csv(dir / "rate.csv", {"v", "L", "optimal_tilt", "H_of_tilt"});
  for (int i = -50; i <= 50; ++i) {
    const double v = i / 10.0;
    const double l = optimal_tilt(v);
    csv.cell(v).cell(legendre_L(v)).cell(l).cell(cumulant_H(l));
    csv.end_row();
  }
  const auto line = PiecewisePath::from({0.0, cfg.T}, {cfg.x0, cfg.x0 + cfg.velocity * cfg.T});
  write_json(dir / "rate.json", {{"velocity", cfg.velocity},
                                 {"T", cfg.T},
                                 {"path_rate", path_rate(line)},
                                 {"action", action_functional(line, V, critical_value(V))}});
  return 0;
}

int cmd_duality(const RunConfig&, const fs::path& dir) {
  CsvWriter csv(dir / "duality-check.csv", {"v", "legendre_L", "numeric_sup", "abs_gap"});
  double worst = 0.0;
  for (int i = -50; i <= 50; ++i) {
    const double v = i / 10.0;
    const double a = legendre_L(v), b = numeric_legendre(v);
    worst = std::max(worst, std::abs(a - b));
    csv.cell(v).cell(a).cell(b).cell(std::abs(a - b));
    csv.end_row();
  }
  const bool ok = worst <= 1e-6;
  write_json(dir / "duality-check.json", {{"max_abs_gap", worst}, {"tolerance", 1e-6}, {"passed", ok}});
  return ok ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& dir) {
  const int k = cfg.k_list.front();
  const bool tilted = cfg.lambda != 0.0;
  const auto tilt = TiltSchedule::constant(cfg.lambda, cfg.T);
  CsvWriter csv(dir / "simulate.csv", {"path", "time", "state"});
  json paths = json::array();
  for (long i = 0; i < cfg.n_paths; ++i) {
    const auto stream = static_cast<std::uint64_t>(i);
    const auto p = tilted ? simulate_tilted(k, cfg.T, cfg.x0, tilt, cfg.seed, stream)
                          : simulate_walk(k, cfg.T, cfg.x0, cfg.seed, stream);
    csv.cell(i).cell(0.0).cell(p.states.front());
    csv.end_row();
    for (std::size_t j = 0; j < p.jumps(); ++j) {
      csv.cell(i).cell(p.jump_times[j]).cell(p.states[j + 1]);
      csv.end_row();
    }
    json entry{{"path", i}, {"jumps", p.jumps()}, {"final_state", p.states.back()}};
    if (tilted) entry["log_martingale"] = log_exp_martingale(p, tilt);
    paths.push_back(entry);
  }
  write_json(dir / "simulate.json",
             {{"k", k}, {"T", cfg.T}, {"x0", cfg.x0}, {"lambda", cfg.lambda}, {"seed", cfg.seed}, {"paths", paths}});
  return 0;
}

int cmd_fk(const RunConfig& cfg, const fs::path& dir, const CommandOptions& opt) {
  const auto V = Potential::parse(cfg.potential);
  FineGrid zero{std::vector<double>(cfg.n_grid, 0.0)};
  const auto lo = lax_oleinik_apply(zero, cfg.T, Direction::positive, V, default_velocity_bound(V), 129);
  const double lo_value = lo.u.at(cfg.x0);
  CsvWriter csv(dir / "fk-check.csv", {"k", "monte_carlo", "std_error", "exact", "lax_oleinik"});
  json rows = json::array();
  for (int k : cfg.k_list) {
    const auto mc = feynman_kac(k, cfg.T, cfg.x0, V, zero, cfg.n_samples, cfg.seed, opt.threads);
    csv.cell(k).cell(mc.value).cell(mc.std_error);
    json row{{"k", k}, {"monte_carlo", mc.value}, {"std_error", mc.std_error}, {"lax_oleinik", lo_value}};
    if (k <= 64) {
      const double ex = feynman_kac_exact(k, cfg.T, cfg.x0, V, zero);
      csv.cell(ex);
      row["exact"] = ex;
    } else {
      csv.cell(std::string());
    }
    csv.cell(lo_value);
    csv.end_row();
    rows.push_back(row);
  }
  write_json(dir / "fk-check.json",
             {{"T", cfg.T}, {"x0", cfg.x0}, {"n_samples", cfg.n_samples}, {"seed", cfg.seed}, {"rows", rows}});
  return 0;
}

int cmd_ldp(const RunConfig& cfg, const fs::path& dir) {
  const auto V = Potential::parse(cfg.potential);
  const auto dev = deviation_function(V, cfg.n_grid);
  double inf = dev.values.at(cfg.ldp_a);
  inf = std::min(inf, dev.values.at(cfg.ldp_b));
  for (std::size_t i = 0; i < cfg.n_grid; ++i) {
    const double x = dev.values.x(i);
    if (x >= cfg.ldp_a && x <= cfg.ldp_b) inf = std::min(inf, dev.values.values[i]);
  }
  const double limit = -inf;
  CsvWriter csv(dir / "ldp-check.csv", {"k", "empirical", "limit", "abs_gap"});
  json rows = json::array();
  for (int k : cfg.k_list) {
    const auto pd = perron_solve(k, V, cfg.tol("perron"));
    const double e = empirical_ldp(stationary_measure(pd, V.id()), cfg.ldp_a, cfg.ldp_b);
    csv.cell(k).cell(e).cell(limit).cell(std::abs(e - limit));
    csv.end_row();
    rows.push_back({{"k", k}, {"empirical", e}, {"limit", limit}});
  }
  write_json(dir / "ldp-check.json", {{"a", cfg.ldp_a}, {"b", cfg.ldp_b}, {"rows", rows}});
  return 0;
}

int cmd_entropy(const RunConfig& cfg, const fs::path& dir) {
  const auto V = Potential::parse(cfg.potential);
  CsvWriter csv(dir / "entropy.csv", {"k", "lambda", "entropy", "entropy_over_k"});
  json rows = json::array();
  for (int k : cfg.k_list) {
    const auto pd = perron_solve(k, V, cfg.tol("perron"));
    const double e = entropy(pd, stationary_measure(pd, V.id()), k, V);
    csv.cell(k).cell(pd.lambda).cell(e).cell(e / k);
    csv.end_row();
    rows.push_back({{"k", k}, {"lambda", pd.lambda}, {"entropy", e}, {"entropy_over_k", e / k}});
  }
  write_json(dir / "entropy.json", {{"potential", cfg.potential}, {"rows", rows}});
  return 0;
}

int cmd_convergence(const RunConfig& cfg, const std::string& dir, const CommandOptions& opt, std::ostream& log) {
  const auto rep = run_convergence_to(cfg, dir, opt.threads);
  for (const auto& r : rep.rows) log << "k=" << r.k << " wall_time_ms=" << r.wall_time_ms << '\n';
  if (!rep.passed()) log << "monotonicity check failed\n";
  return rep.passed() ? 0 : 1;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"perron",   "weakkam", "rate",    "duality-check", "simulate",
                                              "fk-check", "ldp-check", "entropy", "convergence"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                const CommandOptions& options, std::ostream& log) {
  const auto dir = ensure_dir(out_dir);
  if (name == "perron") return cmd_perron(cfg, dir);
  if (name == "weakkam") return cmd_weakkam(cfg, dir, options);
  if (name == "rate") return cmd_rate(cfg, dir);
  if (name == "duality-check") return cmd_duality(cfg, dir);
  if (name == "simulate") return cmd_simulate(cfg, dir);
  if (name == "fk-check") return cmd_fk(cfg, dir, options);
  if (name == "ldp-check") return cmd_ldp(cfg, dir);
  if (name == "entropy") return cmd_entropy(cfg, dir);
  if (name == "convergence") return cmd_convergence(cfg, out_dir, options, log);
  throw invalid_input("unknown subcommand " + name);
}

}  // namespace weakkam
