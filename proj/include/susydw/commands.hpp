#pragma once

// Command implementations behind the susydw CLI. Each command is a pure
// function of RunConfig returning the text/JSON to emit, so it can be
// exercised without a process boundary.

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "susydw/family.hpp"
#include "susydw/grid.hpp"
#include "susydw/seeds.hpp"

namespace susydw {

using Json = nlohmann::ordered_json;

enum class OutputFormat { csv, json, svg };

struct RunConfig {
  SeedKind seed = SeedKind::quartic;
  double shift = 0.0;
  /// Empty selects the seed default (-7 quartic, -51 razavy).
  std::vector<double> gammas;
  std::optional<Interval> domain;
  int samples = 1001;
  int nodes = 2001;
  QuadSettings<double> quad{};
  NormMode norm = NormMode::l2;
  std::optional<double> paper_lower_limit;
  bool allow_singular = false;
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::csv;
  std::optional<Interval> window;
  std::optional<Interval> box;
  Eigen::Index spectrum_points = 4000;
  int levels = 4;
  std::vector<std::string> svg_columns = {"V1", "V1gamma"};

  /// Throws InvalidArgument naming the offending flag.
  void validate() const;
  std::vector<double> effective_gammas() const;
  double first_gamma() const { return effective_gammas().front(); }
};

FamilyContext context_for(const RunConfig& cfg);
NormOptions norm_options(const RunConfig& cfg);
Json provenance(const RunConfig& cfg, const FamilyContext& ctx);

/// Exit status for an exception escaping a command: 2 argument error,
/// 3 singular gamma refused, 4 numerical failure.
int exit_code_for(const std::exception& e);

/// 12 significant digits, "nan"/"inf" for non-finite values.
std::string format_number(double v);

struct FamilyFile {
  double gamma;
  std::string name;
  std::string content;
};

inline const std::vector<std::string> kFamilyColumns = {"x",   "V1",   "V2",         "V1gamma", "deformation",
                                                        "psi", "psi2", "gamma_of_x", "mu"};

/// One CSV (or SVG) per gamma with columns kFamilyColumns.
std::vector<FamilyFile> cmd_family(const RunConfig& cfg);
Json cmd_thresholds(const RunConfig& cfg);
Json cmd_critical(const RunConfig& cfg);
Json cmd_localize(const RunConfig& cfg);
/// Recomputes the shifted-quartic reference table for c in {-2,...,2}.
std::string cmd_table1(const RunConfig& cfg);
Json cmd_spectrum(const RunConfig& cfg);

/// Minimal SVG 1.1 line chart of the selected columns against column 0.
std::string render_svg(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                       const std::vector<std::string>& columns);

}  // namespace susydw
