#include "susydw/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>

#include "susydw/analysis.hpp"
#include "susydw/errors.hpp"
#include "susydw/spectra.hpp"

namespace susydw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ReferenceRow {
  double c;
  double gamma_s;
  double gamma_cr;
  double left_max;
  double right_max;
  double local_min;
};

// Reference thresholds, critical parameters and zero-mode extrema of the
// shifted quartic family.
constexpr std::array<ReferenceRow, 5> kReferenceTable = {{
    {-2.0, -0.1416, -9.1, -4.4, -0.63, -3.11},
    {-1.0, -0.5648, -1.2, -3.4, 0.35, -2.11},
    {0.0, -4.6310, -7.0, -2.4, 1.36, -1.02},
    {1.0, -19.3694, -28.3, -1.4, 2.35, -0.10},
    {2.0, -1.5719, -2.2, -0.4, 3.35, 0.91},
}};

Json number_or_null(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

Json interval_json(Interval i) { return Json::array({i.lo, i.hi}); }

Json extremum_json(const ZeroModeExtremum& e) {
  return Json{{"x", e.x}, {"kind", to_string(e.kind)}, {"height", e.height}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Json report_json(const IsospectralReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels) levels.push_back(Json{{"e_a", l.e_a}, {"e_b", l.e_b}, {"delta", l.delta}});
  return Json{{"offset", r.offset}, {"max_abs_delta", r.max_abs_delta}, {"levels", levels}};
}

}  // namespace

void RunConfig::validate() const {
  if (!std::isfinite(shift)) throw InvalidArgument("--shift must be finite");
  for (double g : gammas) {
    if (!std::isfinite(g)) throw InvalidArgument("--gamma values must be finite");
  }
  if (domain && !(domain->lo < 0.0 && 0.0 < domain->hi)) {
    throw InvalidArgument("--domain must satisfy a < 0 < b");
  }
  if (samples < 2) throw InvalidArgument("--samples must be >= 2");
  if (nodes < 201) throw InvalidArgument("--nodes must be >= 201");
  if (!(quad.abs_tol > 0)) throw InvalidArgument("--abs-tol must be > 0");
  if (!(quad.rel_tol > 0)) throw InvalidArgument("--rel-tol must be > 0");
  if (quad.max_depth < 10) throw InvalidArgument("--max-depth must be >= 10");
  if (window && !(window->lo < window->hi)) throw InvalidArgument("--window must satisfy a < b");
  if (box && !(box->lo < box->hi)) throw InvalidArgument("--box must satisfy a < b");
  if (spectrum_points < 200) throw InvalidArgument("--points must be >= 200");
  if (levels < 1 || levels > 6) throw InvalidArgument("--levels must be in [1, 6]");
  if (format == OutputFormat::svg && svg_columns.empty()) throw InvalidArgument("--columns must not be empty");
  for (const auto& col : svg_columns) {
    if (std::find(kFamilyColumns.begin() + 1, kFamilyColumns.end(), col) == kFamilyColumns.end()) {
      throw InvalidArgument("--columns: unknown column '" + col + "'");
    }
  }
}

std::vector<double> RunConfig::effective_gammas() const {
  if (!gammas.empty()) return gammas;
  return {seed == SeedKind::quartic ? -7.0 : -51.0};
}

FamilyContext context_for(const RunConfig& cfg) {
  FamilyOptions options;
  options.domain = cfg.domain;
  options.quad = cfg.quad;
  options.n_nodes = cfg.nodes;
  return build_context(make_seed(cfg.seed, cfg.shift), options);
}

NormOptions norm_options(const RunConfig& cfg) { return {cfg.norm, cfg.paper_lower_limit}; }

Json provenance(const RunConfig& cfg, const FamilyContext& ctx) {
  Json gammas = Json::array();
  for (double g : cfg.effective_gammas()) gammas.push_back(g);
  return Json{{"seed", to_string(cfg.seed)},
              {"shift", cfg.shift},
              {"gamma", gammas},
              {"domain", interval_json(ctx.domain())},
              {"nodes", cfg.nodes},
              {"quad", Json{{"abs_tol", cfg.quad.abs_tol}, {"rel_tol", cfg.quad.rel_tol}, {"max_depth", cfg.quad.max_depth}}},
              {"norm", to_string(cfg.norm)},
              {"paper_lower_limit", number_or_null(cfg.paper_lower_limit)}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SingularGamma*>(&e)) return 3;
  if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const Unsupported*>(&e)) return 2;
  return 4;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.12g", v);
  return buf.data();
}

std::string render_svg(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                       const std::vector<std::string>& columns) {
  constexpr double kWidth = 640, kHeight = 400, kMargin = 40;
  std::vector<std::size_t> picked;
  for (const auto& c : columns) {
    auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) throw InvalidArgument("--columns: unknown column '" + c + "'");
    picked.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& row : rows) {
    x_lo = std::min(x_lo, row[0]);
    x_hi = std::max(x_hi, row[0]);
    for (std::size_t j : picked) {
      if (!std::isfinite(row[j])) continue;
      y_lo = std::min(y_lo, row[j]);
      y_hi = std::max(y_hi, row[j]);
    }
  }
  if (!(y_hi > y_lo)) {
    y_lo -= 1.0;
    y_hi += 1.0;
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1.0;
  const auto px = [&](double x) { return kMargin + (x - x_lo) / (x_hi - x_lo) * (kWidth - 2 * kMargin); };
  const auto py = [&](double y) { return kHeight - kMargin - (y - y_lo) / (y_hi - y_lo) * (kHeight - 2 * kMargin); };

  static constexpr std::array<const char*, 6> kColours = {"#1f77b4", "#d62728", "#2ca02c",
                                                          "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 10 << "\" font-size=\"11\">" << format_number(x_lo)
      << "</text>\n";
  svg << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - 10
      << "\" font-size=\"11\" text-anchor=\"end\">" << format_number(x_hi) << "</text>\n";
  svg << "<text x=\"4\" y=\"" << kMargin << "\" font-size=\"11\">" << format_number(y_hi) << "</text>\n";
  svg << "<text x=\"4\" y=\"" << kHeight - kMargin << "\" font-size=\"11\">" << format_number(y_lo)
      << "</text>\n";
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const char* colour = kColours[k % kColours.size()];
    // Non-finite samples (masked poles) split the curve.
    std::string points;
    const auto flush = [&] {
      if (!points.empty()) {
        svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" points=\"" << points << "\"/>\n";
        points.clear();
      }
    };
    for (const auto& row : rows) {
      const double y = row[picked[k]];
      if (!std::isfinite(y)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += format_number(px(row[0])) + "," + format_number(py(y));
    }
    flush();
    svg << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin + 14 * k << "\" font-size=\"11\" fill=\""
        << colour << "\" text-anchor=\"end\">" << columns[k] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<FamilyFile> cmd_family(const RunConfig& cfg) {
  cfg.validate();
  const FamilyContext ctx = context_for(cfg);
  const EvalOptions opts{cfg.allow_singular};
  const Interval d = ctx.domain();
  const Eigen::VectorXd xs = linspace<double>(d.lo, d.hi, cfg.samples);
  const RiccatiSeed& seed = ctx.seed();

  std::vector<FamilyFile> files;
  for (double gamma : cfg.effective_gammas()) {
    require_regular(ctx, gamma, opts);
    const double constant = ctx.is_regular(gamma) ? zero_mode_norm(ctx, gamma, norm_options(cfg)) : 1.0;
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(xs.size()));
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      const double psi = constant * psi_unnormalized(ctx, gamma, x, opts);
      rows.push_back({x, seed.v1(x), seed.v2(x), potential_member(ctx, gamma, x, opts),
                      darboux_deformation(ctx, gamma, x, opts), psi, psi * psi, ctx.gamma_at(x), seed.weight(x)});
    }

    std::string content;
    if (cfg.format == OutputFormat::svg) {
      content = render_svg(kFamilyColumns, rows, cfg.svg_columns);
    } else {
      std::ostringstream out;
      for (std::size_t j = 0; j < kFamilyColumns.size(); ++j) out << (j ? "," : "") << kFamilyColumns[j];
      out << '\n';
      for (const auto& row : rows) {
        for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_number(row[j]);
        out << '\n';
      }
      content = out.str();
    }
    const std::string ext = cfg.format == OutputFormat::svg ? ".svg" : ".csv";
    files.push_back({gamma,
                     "family_" + seed.name() + "_c" + format_number(cfg.shift) + "_g" + format_number(gamma) + ext,
                     std::move(content)});
  }
  return files;
}

Json cmd_thresholds(const RunConfig& cfg) {
  cfg.validate();
  const FamilyContext ctx = context_for(cfg);
  const RegularSet set = ctx.regular_set();
  std::string side = "none";
  if (set.below && set.above) {
    side = "below_or_above";
  } else if (set.below) {
    side = "below";
  } else if (set.above) {
    side = "above";
  }
  Json checks = Json::array();
  for (const auto& [name, p] : {std::pair{"right", ctx.right_plateau()}, std::pair{"left", ctx.left_plateau()}}) {
    checks.push_back(Json{{"edge", name},
                          {"x", p.edge},
                          {"gamma_at_edge", p.gamma_at_edge},
                          {"weight_at_edge", p.weight_at_edge},
                          {"tail_estimate", std::isfinite(p.tail) ? Json(p.tail) : Json(nullptr)},
                          {"plateau", p.exists},
                          {"value", p.exists ? Json(p.value) : Json(nullptr)}});
  }
  const GammaRange range = ctx.gamma_range();
  return Json{{"gamma_s", number_or_null(set.below ? set.below : set.above)},
              {"regular_side", side},
              {"regular_set", Json{{"below", number_or_null(set.below)}, {"above", number_or_null(set.above)}}},
              {"gamma_range", Json{{"inf", range.inf}, {"sup", range.sup}}},
              {"plateau_checks", checks},
              {"provenance", provenance(cfg, ctx)}};
}

Json cmd_critical(const RunConfig& cfg) {
  cfg.validate();
  const FamilyContext ctx = context_for(cfg);
  CriticalGamma crit{};
  try {
    crit = critical_gamma(ctx);
  } catch (const NoCrossing&) {
    return Json{{"no_crossing", true}, {"provenance", provenance(cfg, ctx)}};
  }
  // The anomalous side of gamma_cr is decided by classifying a probe point.
  Json interval = nullptr;
  try {
    const double probe = 0.5 * (crit.gamma + crit.threshold);
    const bool inner = alr_classify(ctx, probe);
    const double lo = std::min(crit.gamma, crit.threshold), hi = std::max(crit.gamma, crit.threshold);
    if (inner) {
      interval = Json::array({lo, hi});
    } else if (crit.gamma < crit.threshold) {
      interval = Json::array({nullptr, crit.gamma});
    } else {
      interval = Json::array({crit.gamma, nullptr});
    }
  } catch (const Degenerate&) {
  }
  return Json{{"gamma_cr", crit.gamma},
              {"threshold", crit.threshold},
              {"alr_interval", interval},
              {"peaks_at_cr", Json::array({extremum_json(crit.peaks.left), extremum_json(crit.peaks.right)})},
              {"split_at_cr", extremum_json(crit.peaks.split)},
              {"provenance", provenance(cfg, ctx)}};
}

Json cmd_localize(const RunConfig& cfg) {
  cfg.validate();
  const FamilyContext ctx = context_for(cfg);
  const LocalizationReport r = localization(ctx, cfg.first_gamma(), norm_options(cfg), cfg.window);
  Json peaks = Json::array();
  for (const auto& p : r.peaks) peaks.push_back(extremum_json(p));
  return Json{{"gamma", r.gamma},
              {"norm", to_string(r.norm_mode)},
              {"norm_constant", r.norm_constant},
              {"window", interval_json(r.window)},
              {"split_x", r.split_x},
              {"p_left", r.p_left},
              {"p_right", r.p_right},
              {"ratio", r.p_left / r.p_right},
              {"peaks", peaks},
              {"anomalous", r.anomalous},
              {"provenance", provenance(cfg, ctx)}};
}

std::string cmd_table1(const RunConfig& cfg) {
  cfg.validate();
  FamilyOptions options;
  options.quad = cfg.quad;
  options.n_nodes = cfg.nodes;
  const FamilyContext ctx0 = build_context(quartic_seed(0.0), options);
  const double gamma_s0 = *ctx0.regular_set().below;

  std::ostringstream out;
  out << "c,gamma_s,gamma_cr,left_max,right_max,local_min,delta_vs_paper_percent,gamma_s_mapped,"
         "covariance_rel_diff,status\n";
  for (const ReferenceRow& ref : kReferenceTable) {
    std::array<double, 8> v;
    v.fill(kNaN);
    std::string status = "ok";
    try {
      const FamilyContext ctx = build_context(quartic_seed(ref.c), options);
      const RegularSet set = ctx.regular_set();
      if (!set.below) throw NonConvergence("no plateau of gamma(x) on the right edge");
      v[0] = *set.below;
      v[6] = covariance_map(ctx0, ref.c, gamma_s0);
      v[7] = std::abs(v[6] - v[0]) / std::abs(v[0]);
      const CriticalGamma crit = critical_gamma(ctx);
      v[1] = crit.gamma;
      v[2] = crit.peaks.left.x;
      v[3] = crit.peaks.right.x;
      v[4] = crit.peaks.split.x;
      v[5] = 100.0 * std::max(std::abs(v[0] - ref.gamma_s) / std::abs(ref.gamma_s),
                              std::abs(v[1] - ref.gamma_cr) / std::abs(ref.gamma_cr));
    } catch (const std::exception& e) {
      status = std::string("error: ") + e.what();
    }
    out << format_number(ref.c);
    for (int j : {0, 1, 2, 3, 4, 5, 6, 7}) out << ',' << format_number(v[static_cast<std::size_t>(j)]);
    out << ',' << csv_field(status) << '\n';
  }
  return out.str();
}

Json cmd_spectrum(const RunConfig& cfg) {
  cfg.validate();
  const FamilyContext ctx = context_for(cfg);
  const double gamma = cfg.first_gamma();
  require_regular(ctx, gamma);
  Interval box;
  if (cfg.box) {
    box = *cfg.box;
  } else {
    const Interval decay = decay_interval(ctx, gamma, 1e-8);
    box = {decay.lo - 1.0, decay.hi + 1.0};
  }
  const RiccatiSeed& seed = ctx.seed();
  const auto v1 = [&seed](double x) { return seed.v1(x); };
  const auto v2 = [&seed](double x) { return seed.v2(x); };
  const auto v1g = [&](double x) { return potential_member(ctx, gamma, x); };

  const IsospectralReport family = isospectral_report(v1, v1g, box, cfg.spectrum_points, cfg.levels);
  const IsospectralReport partner = isospectral_report(v1, v2, box, cfg.spectrum_points, cfg.levels);
  const EigenResult member = eigen_lowest({v1g, box, cfg.spectrum_points}, 1);
  return Json{{"box", interval_json(box)},
              {"n_points", cfg.spectrum_points},
              {"levels", cfg.levels},
              {"factorization_energy", seed.factorization_energy()},
              {"member_ground_level", member.values[0]},
              {"family", report_json(family)},
              {"partner", report_json(partner)},
              {"provenance", provenance(cfg, ctx)}};
}

}  // namespace susydw
