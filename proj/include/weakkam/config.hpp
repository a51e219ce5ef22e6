#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace weakkam {

/// Settings shared by all subcommands, read from `key = value` lines.
///
/// Required: potential, k_list, seed.
/// Optional (defaults): T (1), n_grid (2048), n_samples (10000), n_paths (1),
/// x0 (0), lambda (0), velocity (1), delta (0.1), ldp_interval (0.4,0.6),
/// tol.perron (1e-10), tol.fixed_point (1e-8), out (out).
struct RunConfig {
  std::string potential;
  std::vector<int> k_list;
  double T = 1.0;
  std::size_t n_grid = 2048;
  long n_samples = 10'000;
  long n_paths = 1;
  std::uint64_t seed = 0;
  double x0 = 0.0;
  double lambda = 0.0;
  double velocity = 1.0;
  double delta = 0.1;
  double ldp_a = 0.4;
  double ldp_b = 0.6;
  std::map<std::string, double> tolerances{{"perron", 1e-10}, {"fixed_point", 1e-8}};
  std::string out = "out";

  double tol(const std::string& name) const { return tolerances.at(name); }
};

/// Throws config_error naming the offending line (or line 0 for a missing key).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace weakkam
