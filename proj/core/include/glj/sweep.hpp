#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "glj/params.hpp"

namespace glj {

struct SweepRow {
  ModelParams params;  // H resolved to the value actually used
  double eps = 0.0;
  double ell = 0.0;
  double H = 0.0;
  double jump = 0.0;
  double target = 0.0;
  double rel_err = 0.0;
  double psi_jump = 0.0;
  double C0 = 0.0;
  double J0 = 0.0;
  double F = 0.0;
  double circ_inner = 0.0;
  double circ_outer = 0.0;
  double circ_gap = 0.0;
  double m_eps = 0.0;
  /// "ok", or "config_error: ..." / "solver_error: ..." for failed rows.
  std::string status = "ok";
  /// Further per-point diagnostics, JSON output only.
  std::map<std::string, double> diagnostics;

  bool ok() const { return status == "ok"; }
};

struct RateFit {
  std::string name;
  double slope = 0.0;
  double intercept = 0.0;  // of ln y
  double residual = 0.0;   // root-mean-square of the ln y residuals
  double slope_ci = 0.0;   // 95% half-width
  std::size_t points = 0;
};

struct SweepReport {
  ModelParams base;
  std::vector<SweepRow> rows;  // eps descending
  std::vector<RateFit> fits;
};

struct SweepOptions {
  /// More than one job disables continuation between eps points.
  std::size_t jobs = 1;
  /// Completed rows are appended here as JSON lines when set.
  std::filesystem::path journal;
  /// Reuse completed rows found in the journal.
  bool resume = false;
  std::function<void(const SweepRow&)> on_row;
};

struct DensityProfile;

/// Seed for a new eps from a profile at another eps: S-side distances are
/// rescaled by the eps ratio and N is mapped affinely.
std::vector<double> continuation_seed(const DensityProfile& previous, const ModelParams& p,
                                      const RadialMesh& mesh);

/// density -> London -> field -> reports at one parameter set. Failures are
/// recorded in the row status. `previous` seeds the density solve.
SweepRow run_point(const ModelParams& p, const DensityProfile* previous = nullptr,
                   DensityProfile* profile_out = nullptr);

SweepReport run_sweep(const ModelParams& base, std::span<const double> eps_list,
                      const SweepOptions& options = {});

/// Least squares of ln y against ln x.
RateFit fit_rate(std::span<const double> xs, std::span<const double> ys, std::string name = {});

enum class ReportFormat { csv, json };

ReportFormat parse_format(const std::string& name);
std::string report_csv(const SweepReport& report);
std::string report_json(const SweepReport& report);
void emit_report(const SweepReport& report, ReportFormat format, const std::filesystem::path& path);

/// The fixed CSV column order.
const std::vector<std::string>& csv_columns();
std::vector<SweepRow> parse_report_csv(const std::string& text);

}  // namespace glj
