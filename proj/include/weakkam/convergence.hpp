#pragma once

#include <string>
#include <vector>

#include "weakkam/config.hpp"

namespace weakkam {

struct ConvergenceRow {
  int k = 0;
  double lambda_over_k = 0.0;
  double max_V_gap = 0.0;      // max V - lambda_k / k
  double entropy_over_k = 0.0;
  double ldp_sup_gap = 0.0;    // sup |-(1/k) log pi re-centred - I^V| on the fine grid
  double wall_time_ms = 0.0;   // reported on the console only
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool max_V_gap_decreasing = true;
  bool entropy_decreasing = true;
  bool ldp_gap_decreasing = true;

  bool passed() const noexcept { return max_V_gap_decreasing && entropy_decreasing && ldp_gap_decreasing; }
};

/// Solves every k of the config (in parallel across k when threads > 1) and
/// checks that each gap column decreases along k_list. A column that is zero
/// to 1e-12 throughout counts as decreasing.
ConvergenceReport run_convergence(const RunConfig& cfg, int threads = 1);

/// run_convergence plus convergence.csv and convergence.json in out_dir. If
/// a solve fails, the rows finished before it are written followed by a
/// failure marker, and the error is rethrown.
ConvergenceReport run_convergence_to(const RunConfig& cfg, const std::string& out_dir, int threads = 1);

}  // namespace weakkam
