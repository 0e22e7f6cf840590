#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace upq {

inline constexpr const char* kReportSchema = "upq-report/1";

/// One verified statement. `reference` is the oracle value when there is one
/// (NaN otherwise); `tolerance` is the bound the verdict was decided against.
struct ReportRow {
  std::string suite;
  std::string check;
  std::string anchor; // the mathematical statement being checked
  double estimate = 0.0;
  double reference = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

struct PlotSeries {
  std::string name;
  std::vector<double> x, y, err; // err empty or one entry per point
  bool line = true;
};

struct Plot {
  std::string file; // e.g. "growth.svg"
  std::string title, x_label, y_label;
  bool log_x = false;
  bool log_y = false;
  std::vector<PlotSeries> series;
};

struct Report {
  std::string schema = kReportSchema;
  std::vector<ReportRow> rows;
  std::vector<Plot> plots;

  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
  void append(const Report& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    plots.insert(plots.end(), other.plots.begin(), other.plots.end());
  }
};

} // namespace upq
