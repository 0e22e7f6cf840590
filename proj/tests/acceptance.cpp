// Acceptance run: every suite twice with the default configuration, one
// PASS/FAIL line per criterion. Exit status is nonzero if any line fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "upq/serialize.hpp"
#include "upq/suites.hpp"

using namespace upq;

namespace {

struct SuiteRun {
  Report report;
  double seconds = 0.0;
  bool deterministic = false;
};

struct Criterion {
  std::string title;
  std::string suite;
  std::vector<std::string> prefixes; // empty: every row of the suite
  double time_limit = 0.0;           // seconds, 0 for none
};

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

} // namespace

int main() {
  const RunConfig cfg;
  std::map<std::string, SuiteRun> runs;
  double total = 0.0;
  bool all_deterministic = true;
  for (const auto& name : suite_names()) {
    SuiteRun r;
    const auto t0 = std::chrono::steady_clock::now();
    r.report = run_suite(name, cfg);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.deterministic = to_json(run_suite(name, cfg)).dump() == to_json(r.report).dump();
    total += r.seconds;
    all_deterministic = all_deterministic && r.deterministic;
    std::printf("# suite %-9s %3zu rows  %7.2f s\n", name.c_str(), r.report.rows.size(), r.seconds);
    runs.emplace(name, std::move(r));
  }

  const std::vector<Criterion> criteria{
      {"dimension counts by numerical rank, 1 <= p <= q <= 3", "group", {"dimension."}, 1.0},
      {"closure of random products and inverses in U(p,q)", "group", {"closure"}, 5.0},
      {"Iwasawa round trip and uniqueness", "iwasawa", {}, 5.0},
      {"Heisenberg associativity and central commutators", "group", {"heisenberg."}},
      {"Bargmann spherical identity, CCR, group law refinement, commutant", "bargmann", {}, 60.0},
      {"special-representation conditions (i)-(iii)", "special", {}, 60.0},
      {"cocycle identity, fiber-evaluated", "extension", {"cocycle_identity", "closed_form"}},
      {"extension homomorphism and B(k) = 0", "extension", {"homomorphism", "cocycle_on_K"}},
      {"Gram matrix linear independence", "extension", {"gram."}},
      {"quasi-Poisson characteristic functional and Poisson reduction", "qp", {"cf.", "poisson."}},
      {"quasi-invariance of the translated measure", "qp", {"qi."}},
      {"current-group factorization and constant-current consistency", "currents", {}},
  };

  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto& run = runs.at(c.suite);
    int matched = 0;
    std::vector<std::string> failed;
    for (const auto& row : run.report.rows) {
      bool in = c.prefixes.empty();
      for (const auto& p : c.prefixes) in = in || starts_with(row.check, p);
      if (!in) continue;
      ++matched;
      if (!row.pass) failed.push_back(row.check);
    }
    std::string detail = std::to_string(matched) + " checks";
    bool ok = matched > 0 && failed.empty();
    if (c.time_limit > 0.0) {
      char buf[64];
      std::snprintf(buf, sizeof buf, ", suite %.2f s (limit %.0f s)", run.seconds, c.time_limit);
      detail += buf;
      ok = ok && run.seconds < c.time_limit;
    }
    for (const auto& f : failed) detail += "; failed " + f;
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", index, c.title.c_str(), detail.c_str());
    failures += ok ? 0 : 1;
  }

  const bool ok13 = all_deterministic && total <= 600.0;
  std::printf("%s criterion 13: determinism across two runs and total wall time (%s, %.1f s, limit 600 s)\n",
              ok13 ? "PASS" : "FAIL", all_deterministic ? "identical reports" : "reports differ", total);
  failures += ok13 ? 0 : 1;
  return failures == 0 ? 0 : 1;
}
