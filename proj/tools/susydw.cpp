// susydw: command-line front end for the isospectral double-well library.
//
//   susydw family     --seed quartic --shift 0 --gamma -7 [-o out.csv]
//   susydw thresholds --seed razavy
//   susydw critical   --seed quartic --shift 2
//   susydw localize   --norm paper
//   susydw table1
//   susydw spectrum   --gamma -10
//
// Exit codes: 0 success, 2 argument error, 3 singular gamma refused,
// 4 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "susydw/commands.hpp"
#include "susydw/errors.hpp"

namespace {

using namespace susydw;

constexpr const char* kOutputDirEnv = "SUSYDW_OUTPUT_DIR";

Interval parse_interval(const std::vector<double>& v, const std::string& flag) {
  if (v.size() != 2) throw InvalidArgument(flag + " expects two comma-separated numbers a,b");
  return {v[0], v[1]};
}

void write_text(const std::string& text, const std::optional<std::string>& path) {
  if (!path || *path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw InvalidArgument("--output: cannot open '" + *path + "'");
  out << text;
}

std::filesystem::path output_dir(const std::optional<std::string>& path) {
  if (path) return *path;
  if (const char* env = std::getenv(kOutputDirEnv)) return env;
  return ".";
}

struct RawFlags {
  std::string seed = "quartic";
  std::vector<double> domain, window, box;
  std::string norm = "l2";
  std::string format = "csv";
  double lower_limit = 0.0;
  std::string columns = "V1,V1gamma";
};

void add_common(CLI::App* sub, RunConfig& cfg, RawFlags& raw) {
  sub->add_option("--seed", raw.seed, "Riccati seed")->check(CLI::IsMember({"quartic", "razavy"}));
  sub->add_option("--shift", cfg.shift, "Shift c of the seed");
  sub->add_option("--gamma", cfg.gammas, "Family parameter(s)")->delimiter(',');
  sub->add_option("--domain", raw.domain, "Working domain a,b (a < 0 < b)")->delimiter(',');
  sub->add_option("--nodes", cfg.nodes, "Tabulation nodes for gamma(x)");
  sub->add_option("--abs-tol", cfg.quad.abs_tol, "Quadrature absolute tolerance");
  sub->add_option("--rel-tol", cfg.quad.rel_tol, "Quadrature relative tolerance");
  sub->add_option("--max-depth", cfg.quad.max_depth, "Quadrature recursion bound");
  sub->add_option("--norm", raw.norm, "Zero-mode normalization")->check(CLI::IsMember({"paper", "l2"}));
  sub->add_option("--lower-limit", raw.lower_limit, "Lower limit l of |Gamma| in paper normalization");
  sub->add_option("-o,--output", cfg.output, "Output file (directory for several gammas); '-' for stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Supersymmetric isospectral double-well families"};
  app.require_subcommand(1);

  RunConfig cfg;
  RawFlags raw;

  auto* family = app.add_subcommand("family", "Sample V1, V2, V_1gamma, deformation and zero mode per gamma");
  add_common(family, cfg, raw);
  family->add_option("--samples", cfg.samples, "Grid points of the emitted table");
  family->add_flag("--allow-singular", cfg.allow_singular, "Emit singular members with poles masked as nan");
  family->add_option("--format", raw.format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  family->add_option("--columns", raw.columns, "Columns plotted in svg output");

  auto* thresholds = app.add_subcommand("thresholds", "Regularity thresholds (plateaus of gamma(x))");
  add_common(thresholds, cfg, raw);

  auto* critical = app.add_subcommand("critical", "Equal-peak critical gamma and anomalous interval");
  add_common(critical, cfg, raw);

  auto* localize = app.add_subcommand("localize", "Well probabilities of the zero mode");
  add_common(localize, cfg, raw);
  localize->add_option("--window", raw.window, "Integration window a,b")->delimiter(',');

  auto* table1 = app.add_subcommand("table1", "Recompute the shifted-quartic reference table");
  add_common(table1, cfg, raw);

  auto* spectrum = app.add_subcommand("spectrum", "Isospectrality check with a finite-difference solver");
  add_common(spectrum, cfg, raw);
  spectrum->add_option("--points", cfg.spectrum_points, "Interior grid points");
  spectrum->add_option("--levels", cfg.levels, "Levels compared (1-6)");
  spectrum->add_option("--box", raw.box, "Dirichlet box a,b")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    cfg.seed = raw.seed == "razavy" ? SeedKind::razavy : SeedKind::quartic;
    cfg.norm = raw.norm == "paper" ? NormMode::paper : NormMode::l2;
    cfg.format = raw.format == "svg" ? OutputFormat::svg : OutputFormat::csv;
    if (active->count("--lower-limit")) cfg.paper_lower_limit = raw.lower_limit;
    if (!raw.domain.empty()) cfg.domain = parse_interval(raw.domain, "--domain");
    if (!raw.window.empty()) cfg.window = parse_interval(raw.window, "--window");
    if (!raw.box.empty()) cfg.box = parse_interval(raw.box, "--box");
    cfg.svg_columns.clear();
    std::string::size_type start = 0;
    while (start <= raw.columns.size()) {
      const auto end = raw.columns.find(',', start);
      const std::string col = raw.columns.substr(start, end - start);
      if (!col.empty()) cfg.svg_columns.push_back(col);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    cfg.validate();

    if (active == family) {
      const auto files = cmd_family(cfg);
      if (files.size() == 1) {
        write_text(files.front().content, cfg.output);
      } else {
        const auto dir = output_dir(cfg.output);
        std::filesystem::create_directories(dir);
        for (const auto& f : files) write_text(f.content, (dir / f.name).string());
      }
    } else if (active == thresholds) {
      write_text(cmd_thresholds(cfg).dump(2) + "\n", cfg.output);
    } else if (active == critical) {
      write_text(cmd_critical(cfg).dump(2) + "\n", cfg.output);
    } else if (active == localize) {
      write_text(cmd_localize(cfg).dump(2) + "\n", cfg.output);
    } else if (active == table1) {
      write_text(cmd_table1(cfg), cfg.output);
    } else if (active == spectrum) {
      write_text(cmd_spectrum(cfg).dump(2) + "\n", cfg.output);
    }
  } catch (const std::exception& e) {
    std::cerr << "susydw: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
