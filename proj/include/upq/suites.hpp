#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "upq/report.hpp"

namespace upq {

/// Settings shared by every suite. Checks whose statement fixes a signature
/// (for example the (1,2) Bargmann identities) use that signature; the rest
/// use (p, q) from here.
struct RunConfig {
  std::string suite = "all";
  int p = 1;
  int q = 2;
  std::string eps;  // "+,-,…"; empty means all plus
  int degree = 10;  // Bargmann truncation D
  std::uint64_t seed = 42;
  long samples = 20000;
  double window_min = 1e-3;
  double window_max = 10.0;
  std::string out_dir = "upq-report";
};

/// Throws ConfigInvalid: q ≥ p ≥ 1, q ≤ 3, D ≥ 4, |ε| = p, 0 < min < max, samples > 0.
void validate(const RunConfig& cfg);

/// Flat `key = value` text, '#' comments; keys mirror the CLI flags
/// (suite, p, q, eps, degree, seed, samples, window-min, window-max, out-dir).
std::map<std::string, std::string> parse_key_values(const std::string& text);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig load_config(const std::string& path, RunConfig base = {});

const std::vector<std::string>& suite_names(); // without "all"

/// Runs one suite, or every suite in order for "all". Never throws on a
/// failed check; failures are rows with verdict fail.
Report run_suite(const std::string& name, const RunConfig& cfg);

/// report.json, report.csv and one SVG per plot under cfg.out_dir.
void write_report(const Report& report, const std::string& out_dir);

} // namespace upq
