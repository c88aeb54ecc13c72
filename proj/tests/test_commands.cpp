#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "susydw/commands.hpp"
#include "susydw/errors.hpp"

using namespace susydw;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') {
        quoted = !quoted;
      } else if (ch == ',' && !quoted) {
        row.push_back(cell);
        cell.clear();
      } else {
        cell += ch;
      }
    }
    row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> column(const std::vector<std::vector<std::string>>& rows, std::size_t j) {
  std::vector<double> out;
  for (std::size_t i = 1; i < rows.size(); ++i) out.push_back(std::strtod(rows[i][j].c_str(), nullptr));
  return out;
}

struct Run {
  int status;
  std::string out;
};

Run run_cli(const std::string& args) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / ("susydw_cli_" + std::to_string(::getpid()) + ".txt");
  const std::string cmd = std::string(SUSYDW_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(out);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

}  // namespace

TEST_CASE("format_number") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-4.631067913571) == "-4.63106791357");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(-0.0) == "0");
}

TEST_CASE("RunConfig::validate names the flag") {
  RunConfig cfg;
  cfg.levels = 9;
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("--levels"), InvalidArgument);
  cfg = {};
  cfg.domain = Interval{1.0, 2.0};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("--domain"), InvalidArgument);
  cfg = {};
  cfg.format = OutputFormat::svg;
  cfg.svg_columns = {"nope"};
  CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("--columns"), InvalidArgument);
  cfg = {};
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.first_gamma() == -7.0);
  cfg.seed = SeedKind::razavy;
  CHECK(cfg.first_gamma() == -51.0);
}

TEST_CASE("exit_code_for") {
  CHECK(exit_code_for(SingularGamma("x")) == 3);
  CHECK(exit_code_for(InvalidArgument("x")) == 2);
  CHECK(exit_code_for(Unsupported("x")) == 2);
  CHECK(exit_code_for(NoCrossing("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 4);
}

TEST_CASE("cmd_family: quartic gamma = -7 peaks") {
  RunConfig cfg;
  cfg.samples = 2301;
  const auto files = cmd_family(cfg);
  REQUIRE(files.size() == 1);
  CHECK(files[0].name == "family_quartic_c0_g-7.csv");
  const auto rows = parse_csv(files[0].content);
  CHECK(rows[0] == kFamilyColumns);
  CHECK(rows.size() == 2302);
  const auto xs = column(rows, 0), psi2 = column(rows, 6);
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (psi2[i] > psi2[i - 1] && psi2[i] > psi2[i + 1]) maxima.push_back(xs[i]);
  }
  REQUIRE(maxima.size() == 2);
  CHECK(std::abs(maxima[0] + 2.404) < 0.01);
  CHECK(std::abs(maxima[1] - 1.365) < 0.01);
}

TEST_CASE("cmd_family: undeformed limit and several gammas") {
  RunConfig cfg;
  cfg.gammas = {-1e12, -20.0};
  const auto files = cmd_family(cfg);
  REQUIRE(files.size() == 2);
  CHECK(files[0].name != files[1].name);
  // The deformation is of order w |F| / |gamma|, so the limit is only
  // reached where the weight is moderate.
  const auto rows = parse_csv(files[0].content);
  const auto xs = column(rows, 0), v1 = column(rows, 1), vg = column(rows, 3);
  for (std::size_t i = 0; i < v1.size(); ++i) {
    if (xs[i] >= -2.5) CHECK(std::abs(v1[i] - vg[i]) < 1e-6);
  }
}

TEST_CASE("cmd_family: Razavy gamma = -51 has an interior minimum of Psi^2") {
  RunConfig cfg;
  cfg.seed = SeedKind::razavy;
  cfg.samples = 2001;
  const auto rows = parse_csv(cmd_family(cfg).front().content);
  const auto xs = column(rows, 0), psi2 = column(rows, 6);
  bool found = false;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (psi2[i] < psi2[i - 1] && psi2[i] < psi2[i + 1]) found = found || std::abs(xs[i] + 0.076) < 0.01;
  }
  CHECK(found);
}

TEST_CASE("cmd_family: singular gamma") {
  RunConfig cfg;
  cfg.gammas = {-3.0};
  CHECK_THROWS_AS(cmd_family(cfg), SingularGamma);
  cfg.allow_singular = true;
  const auto rows = parse_csv(cmd_family(cfg).front().content);
  CHECK(rows.size() == 1002);
}

TEST_CASE("cmd_family: svg output") {
  RunConfig cfg;
  cfg.format = OutputFormat::svg;
  const auto files = cmd_family(cfg);
  CHECK(files[0].name == "family_quartic_c0_g-7.svg");
  CHECK(files[0].content.find("<svg") != std::string::npos);
  CHECK(files[0].content.find("</svg>") != std::string::npos);
  CHECK(files[0].content.find("polyline") != std::string::npos);
}

TEST_CASE("cmd_thresholds") {
  RunConfig cfg;
  Json j = cmd_thresholds(cfg);
  CHECK(std::abs(j["gamma_s"].get<double>() + 4.6310) < 1e-3);
  CHECK(j["regular_side"] == "below");
  cfg.shift = -2.0;
  CHECK(cmd_thresholds(cfg)["gamma_s"].get<double>() == doctest::Approx(-0.1416).epsilon(0.02));
  cfg = {};
  cfg.seed = SeedKind::razavy;
  j = cmd_thresholds(cfg);
  CHECK(j["regular_set"]["below"].get<double>() == doctest::Approx(-16.8096).epsilon(1e-3));
  CHECK(j["regular_set"]["above"].get<double>() == doctest::Approx(16.8096).epsilon(1e-3));
  CHECK(j["provenance"]["seed"] == "razavy");
}

TEST_CASE("cmd_critical") {
  RunConfig cfg;
  cfg.shift = 2.0;
  CHECK(cmd_critical(cfg)["gamma_cr"].get<double>() == doctest::Approx(-2.2).epsilon(0.03));
  cfg.shift = -1.0;
  CHECK(cmd_critical(cfg)["gamma_cr"].get<double>() == doctest::Approx(-1.2).epsilon(0.03));
  cfg.shift = 0.0;
  const Json j = cmd_critical(cfg);
  REQUIRE(j["alr_interval"].is_array());
  CHECK(j["alr_interval"][1].get<double>() == doctest::Approx(j["threshold"].get<double>()));
  cfg.seed = SeedKind::razavy;
  cfg.shift = 1.0;
  CHECK(cmd_critical(cfg)["no_crossing"] == true);
}

TEST_CASE("cmd_localize") {
  RunConfig cfg;
  cfg.norm = NormMode::paper;
  cfg.paper_lower_limit = -2.425;
  Json j = cmd_localize(cfg);
  CHECK(j["p_left"].get<double>() == doctest::Approx(0.31954).epsilon(0.03));
  CHECK(j["p_right"].get<double>() == doctest::Approx(0.68989).epsilon(0.03));
  CHECK(j["anomalous"] == false);
  cfg = {};
  cfg.seed = SeedKind::razavy;
  j = cmd_localize(cfg);
  CHECK(j["ratio"].get<double>() == doctest::Approx(0.4729).epsilon(0.05));
}

TEST_CASE("cmd_table1") {
  const std::string text = cmd_table1({});
  const auto rows = parse_csv(text);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][0] == "c");
  const double gs[] = {-0.1416, -0.5648, -4.6310, -19.3694, -1.5719};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].back() == "ok");
    CHECK(std::strtod(rows[i][1].c_str(), nullptr) == doctest::Approx(gs[i - 1]).epsilon(5e-3));
    CHECK(std::strtod(rows[i][8].c_str(), nullptr) < 1e-4);
  }
  CHECK(cmd_table1({}) == text);
}

TEST_CASE("cmd_spectrum") {
  RunConfig cfg;
  cfg.gammas = {-10.0};
  cfg.spectrum_points = 2000;
  const Json j = cmd_spectrum(cfg);
  CHECK(std::abs(j["member_ground_level"].get<double>()) < 5e-3);
  CHECK(j["family"]["offset"] == -1);
  CHECK(j["partner"]["offset"] == 0);
  CHECK(j["family"]["levels"].size() == 4);
}

TEST_CASE("CLI: exit codes") {
  CHECK(run_cli("thresholds").status == 0);
  CHECK(run_cli("thresholds --seed cubic").status == 2);
  CHECK(run_cli("family --gamma=-3").status == 3);
  CHECK(run_cli("family --gamma=-3 --allow-singular --samples 11").status == 0);
  CHECK(run_cli("spectrum --levels 9").status == 2);
  CHECK(run_cli("family --domain 1,2").status == 2);
  CHECK(run_cli("nosuchcommand").status == 2);
}

TEST_CASE("CLI: negative gamma without '=' and deterministic output") {
  const Run a = run_cli("family --gamma -7 --samples 51 -o -");
  const Run b = run_cli("family --gamma=-7 --samples 51");
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("x,V1,V2,", 0) == 0);
  const Run t1 = run_cli("table1");
  const Run t2 = run_cli("table1");
  CHECK(t1.status == 0);
  CHECK(t1.out == t2.out);
}

TEST_CASE("CLI: several gammas write one file each") {
  const auto dir = std::filesystem::temp_directory_path() / ("susydw_multi_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  CHECK(run_cli("family --gamma=-7,-20 --samples 21 -o " + dir.string()).status == 0);
  CHECK(std::filesystem::exists(dir / "family_quartic_c0_g-7.csv"));
  CHECK(std::filesystem::exists(dir / "family_quartic_c0_g-20.csv"));
  std::filesystem::remove_all(dir);
}
