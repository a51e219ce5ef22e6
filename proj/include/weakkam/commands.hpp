#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "weakkam/config.hpp"

namespace weakkam {

struct CommandOptions {
  int threads = 1;
  /// weakkam: also run the value-iteration fixed point.
  bool fixed_point = false;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand, writing `<name>.csv` (plus per-k files for perron)
/// and `<name>.json` into out_dir. Returns 0, or 1 when the subcommand's own
/// check fails. Library errors propagate.
int run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir,
                const CommandOptions& options, std::ostream& log);

/// sup over lambda of (lambda v - H(lambda)) by a grid scan on [-30, 30] and
/// golden-section refinement.
double numeric_legendre(double v);

}  // namespace weakkam
