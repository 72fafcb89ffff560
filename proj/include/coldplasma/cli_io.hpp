#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coldplasma/scenario.hpp"

namespace coldplasma {

struct RunConfig {
  double n_minus = 0.0;
  double n_plus = 0.0;
  double v_minus0 = 0.0;
  double v_plus0 = 0.0;
  double e_minus0 = 0.0;
  double e_plus0 = 0.0;
  double phi0 = 0.0;
  std::optional<double> horizon;  ///< default: three periods of the slower medium
  SolverSettings settings;
  std::filesystem::path out_dir = ".";

  RiemannProblem problem() const;
  double effective_horizon() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys, malformed
/// lines, non-numeric values and n <= 0 raise SolverError(InvalidInput) whose
/// message names the key and the line; missing required keys are listed together.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

struct SeriesRow {
  double t = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  double e = 0.0;
  double x_minus = 0.0;
  double x_plus = 0.0;
  SegmentKind segment_kind = SegmentKind::SingularShock;
};

std::vector<SeriesRow> series_rows(const Timeline& timeline);

/// Header `t,phi,dphi,e,x_minus,x_plus,segment_kind`, 17 significant digits, LF endings.
std::string write_series_csv(const std::vector<SeriesRow>& rows);
std::vector<SeriesRow> parse_series_csv(std::string_view text);

nlohmann::json timeline_json(const Timeline& timeline, const ValidationReport& report);
nlohmann::json report_json(const ValidationReport& report);

struct RenderStyle {
  int characteristics_per_family = 14;
  int samples_per_curve = 400;
  std::string interface_color = "#d62728";
  std::string minus_color = "#3b6fb6";
  std::string plus_color = "#3a8a3a";
  std::string fan_fill = "#f3d9a4";
};

/// SVG 1.1, 800x600 viewBox: characteristic families, filled rarefaction
/// regions, the interface in red and one marker per event. Deterministic.
std::string render_characteristic_plane(const Timeline& timeline, const RiemannProblem& problem,
                                        const RenderStyle& style = {});

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Exit codes returned by run_cli.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitNoSolution = 2,
  kExitStall = 3,
  kExitValidation = 4,
};

/// Command-line driver; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coldplasma
