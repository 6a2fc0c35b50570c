#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "structsparse/core/errors.hpp"
#include "structsparse/core/metrics.hpp"

namespace structsparse::harness {

inline constexpr const char* kReportHeader =
    "trial,method,rel_error,psnr,support_precision,support_recall,iterations,wall_time_s,seed";

struct ReportRow {
  int trial = 0;
  std::string method;
  Metrics metrics;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;
  bool converged = true;
};

/// One evaluated grid point for parameter-searched methods.
struct GridRow {
  int trial = 0;
  std::string method;
  double lambda = 0.0;
  double tau = 0.0;
  double rel_error = 0.0;
  bool selected = false;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<GridRow> grid;
  std::vector<std::string> notes;
  /// Some solver aborted (divergence or a failed inner minimization).
  bool solver_failure = false;

  void sort() {
    std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
      return std::tie(a.trial, a.method) < std::tie(b.trial, b.method);
    });
    std::stable_sort(grid.begin(), grid.end(), [](const GridRow& a, const GridRow& b) {
      return std::tie(a.trial, a.method) < std::tie(b.trial, b.method);
    });
  }

  bool all_converged() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.converged; });
  }
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_report(std::ostream& out, const ExperimentReport& rep) {
  out << kReportHeader << '\n';
  char wall[32];
  for (const auto& r : rep.rows) {
    std::snprintf(wall, sizeof wall, "%.6f", r.wall_time_s);
    out << r.trial << ',' << r.method << ',' << format_real(r.metrics.relative_error) << ','
        << format_real(r.metrics.psnr) << ',' << format_real(r.metrics.support_precision) << ','
        << format_real(r.metrics.support_recall) << ',' << r.iterations << ',' << wall << ',' << r.seed << '\n';
  }
}

inline void write_grid(std::ostream& out, const ExperimentReport& rep) {
  out << "trial,method,lambda,tau,rel_error,selected\n";
  for (const auto& g : rep.grid)
    out << g.trial << ',' << g.method << ',' << format_real(g.lambda) << ',' << format_real(g.tau) << ','
        << format_real(g.rel_error) << ',' << (g.selected ? 1 : 0) << '\n';
}

inline void write_report(const std::string& path, const ExperimentReport& rep) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write_report(f, rep);
  if (!rep.grid.empty()) {
    std::ofstream g(path + ".grid.csv", std::ios::binary);
    if (!g) throw IoError("cannot open " + path + ".grid.csv for writing");
    write_grid(g, rep);
  }
}

}  // namespace structsparse::harness
