#include "weakkam/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "weakkam/errors.hpp"
#include "weakkam/format.hpp"
#include "weakkam/potential.hpp"

namespace weakkam {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw config_error("line " + std::to_string(line) + ": " + msg, line);
}

double positive_real(std::string_view v, int line, const std::string& key) {
  double x = 0.0;
  try {
    x = parse_real(v);
  } catch (const error&) {
    fail(line, "malformed value for " + key + ": '" + std::string(v) + "'");
  }
  if (!(x > 0.0) || !std::isfinite(x)) fail(line, key + " must be positive");
  return x;
}

double any_real(std::string_view v, int line, const std::string& key) {
  try {
    double x = parse_real(v);
    if (!std::isfinite(x)) fail(line, key + " must be finite");
    return x;
  } catch (const config_error&) {
    throw;
  } catch (const error&) {
    fail(line, "malformed value for " + key + ": '" + std::string(v) + "'");
  }
}

long integer(std::string_view v, int line, const std::string& key, long min) {
  long x = 0;
  try {
    x = parse_integer(v);
  } catch (const error&) {
    fail(line, "malformed value for " + key + ": '" + std::string(v) + "'");
  }
  if (x < min) fail(line, key + " must be at least " + std::to_string(min));
  return x;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) fail(line, "expected key = value");
    const std::string key(trim(s.substr(0, eq)));
    const std::string_view val = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (val.empty()) fail(line, "empty value for " + key);
    if (!seen.insert(key).second) fail(line, "duplicate key " + key);

    if (key == "potential") {
      try {
        (void)Potential::parse(val);
      } catch (const error& e) {
        fail(line, std::string("bad potential: ") + e.what());
      }
      cfg.potential = std::string(val);
    } else if (key == "k_list") {
      for (const auto& part : split(val, ',')) {
        const long k = integer(trim(part), line, key, 2);
        if (k > (1L << 20)) fail(line, "k_list entry too large");
        if (!cfg.k_list.empty() && k <= cfg.k_list.back()) fail(line, "k_list must be strictly increasing");
        cfg.k_list.push_back(static_cast<int>(k));
      }
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(integer(val, line, key, 0));
    } else if (key == "T") {
      cfg.T = positive_real(val, line, key);
    } else if (key == "n_grid") {
      cfg.n_grid = static_cast<std::size_t>(integer(val, line, key, 16));
    } else if (key == "n_samples") {
      cfg.n_samples = integer(val, line, key, 1);
    } else if (key == "n_paths") {
      cfg.n_paths = integer(val, line, key, 1);
    } else if (key == "x0") {
      cfg.x0 = any_real(val, line, key);
    } else if (key == "lambda") {
      cfg.lambda = any_real(val, line, key);
    } else if (key == "velocity") {
      cfg.velocity = any_real(val, line, key);
    } else if (key == "delta") {
      cfg.delta = positive_real(val, line, key);
    } else if (key == "ldp_interval") {
      const auto parts = split(val, ',');
      if (parts.size() != 2) fail(line, "ldp_interval needs two values a,b");
      cfg.ldp_a = any_real(trim(parts[0]), line, key);
      cfg.ldp_b = any_real(trim(parts[1]), line, key);
      if (cfg.ldp_a > cfg.ldp_b) fail(line, "ldp_interval needs a <= b");
    } else if (key.rfind("tol.", 0) == 0 && cfg.tolerances.count(key.substr(4))) {
      cfg.tolerances[key.substr(4)] = positive_real(val, line, key);
    } else if (key == "out") {
      cfg.out = std::string(val);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  for (const char* req : {"potential", "k_list", "seed"})
    if (!seen.count(req)) throw config_error(std::string("missing required key '") + req + "'", 0);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw config_error("cannot open config file " + path, 0);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

}  // namespace weakkam
