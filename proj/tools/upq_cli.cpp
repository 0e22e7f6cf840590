// Batch runner for the verification suites.
#include <iostream>

#include <CLI11.hpp>

#include "upq/errors.hpp"
#include "upq/suites.hpp"

int main(int argc, char** argv) {
  using namespace upq;
  CLI::App app{"Run U(p,q) verification suites and write JSON/CSV/SVG reports"};
  RunConfig flags;
  std::string config_path;
  app.add_option("--config", config_path, "key = value file; explicit flags override it");
  app.add_option("--suite", flags.suite, "group, iwasawa, bargmann, special, extension, qp, currents or all");
  app.add_option("--p", flags.p, "signature p");
  app.add_option("--q", flags.q, "signature q");
  app.add_option("--eps", flags.eps, "sign vector, e.g. +,-");
  app.add_option("--degree", flags.degree, "Bargmann truncation degree D");
  app.add_option("--seed", flags.seed, "master seed");
  app.add_option("--samples", flags.samples, "Monte Carlo sample count");
  app.add_option("--window-min", flags.window_min, "inner radius of the S window");
  app.add_option("--window-max", flags.window_max, "outer radius of the S window");
  app.add_option("--out-dir", flags.out_dir, "report directory");
  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    // Flags given on the command line win over the file.
    static const char* keys[] = {"suite", "p", "q", "eps", "degree", "seed", "samples", "window-min", "window-max", "out-dir"};
    for (const char* key : keys) {
      const auto* opt = app.get_option(std::string("--") + key);
      if (opt->count() > 0) apply_setting(cfg, key, opt->as<std::string>());
    }
    validate(cfg);
    const Report report = run_suite(cfg.suite, cfg);
    write_report(report, cfg.out_dir);
    std::size_t failed = 0;
    for (const auto& row : report.rows)
      if (!row.pass) {
        ++failed;
        std::cerr << "FAIL " << row.suite << " " << row.check << " estimate=" << row.estimate
                  << " tolerance=" << row.tolerance << "\n";
      }
    std::cout << report.rows.size() - failed << "/" << report.rows.size() << " checks passed; report in "
              << cfg.out_dir << "\n";
    if (failed > 0) throw SuiteFailed(std::to_string(failed) + " check(s) failed");
  } catch (const ConfigInvalid& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
