#include "weakkam/convergence.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <optional>

#include "weakkam/errors.hpp"
#include "weakkam/io.hpp"
#include "weakkam/parallel.hpp"
#include "weakkam/perron.hpp"
#include "weakkam/weak_kam.hpp"

namespace weakkam {

namespace {

struct Partial {
  std::vector<ConvergenceRow> rows;
  std::exception_ptr failure;
};

Partial solve_all(const RunConfig& cfg, int threads) {
  const auto V = Potential::parse(cfg.potential);
  Partial out;
  std::optional<DeviationFunction> dev;
  try {
    dev = deviation_function(V, cfg.n_grid);
  } catch (...) {
    out.failure = std::current_exception();
    return out;
  }

  const std::size_t n = cfg.k_list.size();
  std::vector<std::optional<ConvergenceRow>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  parallel_for(n, resolve_threads(threads), [&](std::size_t i) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const int k = cfg.k_list[i];
      const auto pd = perron_solve(k, V, cfg.tol("perron"));
      const auto sm = stationary_measure(pd, V.id());
      const double ent = entropy(pd, sm, k, V);
      const auto profile = empirical_rate_profile(sm, cfg.n_grid);
      double gap = 0.0;
      for (std::size_t j = 0; j < cfg.n_grid; ++j)
        gap = std::max(gap, std::abs(profile.values[j] - dev->values.values[j]));
      ConvergenceRow row;
      row.k = k;
      row.lambda_over_k = pd.lambda / k;
      row.max_V_gap = V.max_value() - pd.lambda / k;
      row.entropy_over_k = ent / k;
      row.ldp_sup_gap = gap;
      row.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      slots[i] = row;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      out.failure = errors[i];
      break;
    }
    out.rows.push_back(*slots[i]);
  }
  return out;
}

bool decreasing(const std::vector<ConvergenceRow>& rows, double ConvergenceRow::*col) {
  bool all_zero = true;
  for (const auto& r : rows) all_zero = all_zero && std::abs(r.*col) <= 1e-12;
  if (all_zero) return true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(std::abs(rows[i].*col) < std::abs(rows[i - 1].*col))) return false;
  return true;
}

ConvergenceReport finish(std::vector<ConvergenceRow> rows) {
  ConvergenceReport rep;
  rep.max_V_gap_decreasing = decreasing(rows, &ConvergenceRow::max_V_gap);
  rep.entropy_decreasing = decreasing(rows, &ConvergenceRow::entropy_over_k);
  rep.ldp_gap_decreasing = decreasing(rows, &ConvergenceRow::ldp_sup_gap);
  rep.rows = std::move(rows);
  return rep;
}

}  // namespace

ConvergenceReport run_convergence(const RunConfig& cfg, int threads) {
  auto part = solve_all(cfg, threads);
  if (part.failure) std::rethrow_exception(part.failure);
  return finish(std::move(part.rows));
}

ConvergenceReport run_convergence_to(const RunConfig& cfg, const std::string& out_dir, int threads) {
  auto part = solve_all(cfg, threads);
  const auto dir = ensure_dir(out_dir);
  CsvWriter csv(dir / "convergence.csv", {"k", "lambda_over_k", "max_V_gap", "entropy_over_k", "ldp_sup_gap"});
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : part.rows) {
    csv.cell(r.k).cell(r.lambda_over_k).cell(r.max_V_gap).cell(r.entropy_over_k).cell(r.ldp_sup_gap);
    csv.end_row();
    rows.push_back({{"k", r.k},
                    {"lambda_over_k", r.lambda_over_k},
                    {"max_V_gap", r.max_V_gap},
                    {"entropy_over_k", r.entropy_over_k},
                    {"ldp_sup_gap", r.ldp_sup_gap}});
  }
  nlohmann::json doc{{"potential", cfg.potential}, {"n_grid", cfg.n_grid}, {"rows", rows}};
  if (part.failure) {
    std::string what = "unknown error";
    try {
      std::rethrow_exception(part.failure);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    csv.marker("FAILED: " + what);
    doc["failed"] = what;
    write_json(dir / "convergence.json", doc);
    std::rethrow_exception(part.failure);
  }
  auto rep = finish(std::move(part.rows));
  doc["checks"] = {{"max_V_gap_decreasing", rep.max_V_gap_decreasing},
                   {"entropy_decreasing", rep.entropy_decreasing},
                   {"ldp_gap_decreasing", rep.ldp_gap_decreasing},
                   {"passed", rep.passed()}};
  write_json(dir / "convergence.json", doc);
  return rep;
}

}  // namespace weakkam
