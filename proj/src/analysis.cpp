#include "susydw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "susydw/errors.hpp"

namespace susydw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double height_asymmetry(const PeakPair& p) {
  return (p.left.height - p.right.height) / (p.left.height + p.right.height);
}

double integrate_chunked(const auto& f, double a, double b, const QuadSettings<double>& q, int chunks) {
  detail::CompensatedSum<double> total;
  for (int k = 0; k < chunks; ++k) {
    const double lo = a + (b - a) * k / chunks;
    const double hi = (k + 1 == chunks) ? b : a + (b - a) * (k + 1) / chunks;
    total.add(integrate<double>(f, lo, hi, q));
  }
  return total.value();
}

}  // namespace

double gamma_star(const FamilyContext& ctx, double x) {
  const double F = ctx.seed().f(x);
  if (std::abs(F) < 1e-12) {
    throw PoleAtTurningPoint("gamma* diverges where F vanishes, x = " + std::to_string(x));
  }
  return -ctx.seed().weight(x) / F + ctx.gamma_at(x);
}

namespace {

std::vector<ZeroModeExtremum> scaled_extrema(const FamilyContext& ctx, double gamma, double scale, int n_scan) {
  require_regular(ctx, gamma);
  const Interval d = ctx.domain();
  const auto phi = [&](double x) { return phi_general(ctx, gamma, x); };
  const double probe = d.width() / (n_scan - 1) * 1e-3;

  std::vector<ZeroModeExtremum> out;
  for (double r : find_roots<double>(phi, d.lo, d.hi, n_scan)) {
    // (ln Psi^2)' = -2 Phi_g: Psi^2 rises while Phi_g < 0.
    const double left = phi(std::max(d.lo, r - probe));
    const double right = phi(std::min(d.hi, r + probe));
    ExtremumKind kind;
    if (left < 0 && right > 0) {
      kind = ExtremumKind::max;
    } else if (left > 0 && right < 0) {
      kind = ExtremumKind::min;
    } else {
      continue;
    }
    const double psi = scale * psi_unnormalized(ctx, gamma, r);
    out.push_back({r, kind, psi * psi});
  }
  return out;
}

PeakPair pick_peaks(const std::vector<ZeroModeExtremum>& extrema, double gamma) {
  std::vector<ZeroModeExtremum> maxima;
  for (const auto& e : extrema) {
    if (e.kind == ExtremumKind::max) maxima.push_back(e);
  }
  if (maxima.size() < 2) {
    throw OnePeak("zero mode at gamma = " + std::to_string(gamma) + " has " +
                  std::to_string(maxima.size()) + " maximum");
  }
  std::partial_sort(maxima.begin(), maxima.begin() + 2, maxima.end(),
                    [](const auto& a, const auto& b) { return a.height > b.height; });
  PeakPair pair{maxima[0], maxima[1], {}};
  if (pair.left.x > pair.right.x) std::swap(pair.left, pair.right);

  bool found = false;
  for (const auto& e : extrema) {
    if (e.kind != ExtremumKind::min || e.x <= pair.left.x || e.x >= pair.right.x) continue;
    if (!found || e.height < pair.split.height) pair.split = e;
    found = true;
  }
  if (!found) throw OnePeak("no minimum between the two zero-mode peaks");
  return pair;
}

}  // namespace

std::vector<ZeroModeExtremum> zm_extrema(const FamilyContext& ctx, double gamma, const NormOptions& norm,
                                         int n_scan) {
  require_regular(ctx, gamma);
  return scaled_extrema(ctx, gamma, zero_mode_norm(ctx, gamma, norm), n_scan);
}

PeakPair dominant_peaks(const FamilyContext& ctx, double gamma, const NormOptions& norm) {
  return pick_peaks(zm_extrema(ctx, gamma, norm), gamma);
}

CriticalGamma critical_gamma(const FamilyContext& ctx) {
  const RegularSet set = ctx.regular_set();
  // The asymmetry is scale free, so unnormalized heights suffice.
  const auto asymmetry = [&](double g) {
    try {
      return height_asymmetry(pick_peaks(scaled_extrema(ctx, g, 1.0, 2001), g));
    } catch (const OnePeak&) {
      return kNaN;
    }
  };

  struct Side {
    std::optional<double> threshold;
    double direction;
  };
  for (const Side side : {Side{set.below, -1.0}, Side{set.above, 1.0}}) {
    if (!side.threshold) continue;
    const double t = *side.threshold;
    const double scale = std::max(std::abs(t), 1e-6);
    const auto at = [&](int k) { return t + side.direction * scale * (1.001 * std::ldexp(1.0, k) - 1.0); };

    double prev = at(0);
    double d_prev = asymmetry(prev);
    for (int k = 1; std::abs(at(k) - t) <= 1e6 * scale; ++k) {
      const double g = at(k);
      const double d = asymmetry(g);
      if (std::isfinite(d) && std::isfinite(d_prev) && std::signbit(d) != std::signbit(d_prev)) {
        double lo = prev, hi = g, d_lo = d_prev;
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
          mid = 0.5 * (lo + hi);
          const double d_mid = asymmetry(mid);
          if (!std::isfinite(d_mid)) throw NonConvergence("critical_gamma: lost a peak during bisection");
          if (std::abs(d_mid) < 2e-7 || std::abs(hi - lo) <= 1e-14 * std::abs(mid)) break;
          if (std::signbit(d_mid) == std::signbit(d_lo)) {
            lo = mid;
            d_lo = d_mid;
          } else {
            hi = mid;
          }
        }
        return {mid, t, dominant_peaks(ctx, mid)};
      }
      prev = g;
      d_prev = d;
    }
  }
  throw NoCrossing("peak heights never become equal on the regular range");
}

WellPair find_wells(const FamilyContext& ctx, double gamma) {
  require_regular(ctx, gamma);
  const Interval d = ctx.domain();
  const auto v = [&](double x) { return potential_member(ctx, gamma, x); };
  std::vector<Well> minima;
  for (const auto& e : find_extrema<double>(v, d.lo, d.hi)) {
    if (e.kind == ExtremumKind::min) minima.push_back({e.x, v(e.x)});
  }
  if (minima.size() < 2) throw Degenerate("V_1gamma has fewer than two wells on the domain");
  std::partial_sort(minima.begin(), minima.begin() + 2, minima.end(),
                    [](const Well& a, const Well& b) { return a.depth < b.depth; });
  WellPair wells{minima[0], minima[1], false};
  if (wells.left.x > wells.right.x) std::swap(wells.left, wells.right);

  const double scale = 1.0 + std::max(std::abs(wells.left.depth), std::abs(wells.right.depth));
  if (std::abs(wells.left.depth - wells.right.depth) > 1e-9 * scale) {
    wells.left_is_shallower = wells.left.depth > wells.right.depth;
    return wells;
  }

  // Equal minima: the well holding more area below the barrier top is deeper.
  constexpr int kSamples = 4001;
  double barrier_x = wells.left.x;
  double barrier = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 400; ++i) {
    const double x = wells.left.x + (wells.right.x - wells.left.x) * i / 400.0;
    const double vx = v(x);
    if (vx > barrier) {
      barrier = vx;
      barrier_x = x;
    }
  }
  double area_left = 0.0, area_right = 0.0;
  const double step = d.width() / (kSamples - 1);
  for (int i = 0; i < kSamples; ++i) {
    const double x = d.lo + step * i;
    const double below = std::max(0.0, barrier - v(x)) * step;
    (x < barrier_x ? area_left : area_right) += below;
  }
  if (std::abs(area_left - area_right) <= 1e-9 * std::max(area_left, area_right)) {
    throw Degenerate("wells of V_1gamma are indistinguishable");
  }
  wells.left_is_shallower = area_left < area_right;
  return wells;
}

bool alr_classify(const FamilyContext& ctx, double gamma) {
  const PeakPair peaks = dominant_peaks(ctx, gamma);
  const WellPair wells = find_wells(ctx, gamma);
  const auto& shallow = wells.left_is_shallower ? peaks.left : peaks.right;
  const auto& deep = wells.left_is_shallower ? peaks.right : peaks.left;
  return shallow.height > deep.height;
}

LocalizationReport localization(const FamilyContext& ctx, double gamma, const NormOptions& norm,
                                 std::optional<Interval> window) {
  require_regular(ctx, gamma);
  const Interval d = ctx.domain();
  if (!window) {
    if (norm.mode == NormMode::paper) {
      const double c = ctx.seed().shift();
      window = Interval{std::max(d.lo, c - 3.0), std::min(d.hi, c + 3.0)};
    } else {
      window = d;
    }
  }
  if (!(window->lo < window->hi)) throw InvalidArgument("localization: empty window");

  const PeakPair peaks = dominant_peaks(ctx, gamma, norm);
  const double split = peaks.split.x;
  if (!(window->lo < split && split < window->hi)) {
    throw InvalidArgument("localization: split point " + std::to_string(split) + " outside the window");
  }
  const double constant = zero_mode_norm(ctx, gamma, norm);
  const auto density = [&](double x) {
    const double p = constant * psi_unnormalized(ctx, gamma, x);
    return p * p;
  };
  LocalizationReport report{};
  report.gamma = gamma;
  report.norm_mode = norm.mode;
  report.norm_constant = constant;
  report.window = *window;
  report.split_x = split;
  report.p_left = integrate_chunked(density, window->lo, split, ctx.quad(), 16);
  report.p_right = integrate_chunked(density, split, window->hi, ctx.quad(), 16);
  report.peaks = {peaks.left, peaks.right};
  try {
    report.anomalous = alr_classify(ctx, gamma);
  } catch (const Degenerate&) {
    // Without a shallower well there is nothing anomalous to report.
    report.anomalous = false;
  }
  return report;
}

double covariance_map(const FamilyContext& ctx0, double c, double gamma0) {
  if (ctx0.seed().kind() != SeedKind::quartic || ctx0.seed().shift() != 0.0) {
    throw InvalidArgument("shift covariance needs a context on the unshifted quartic seed");
  }
  if (c == 0.0) return gamma0;
  return (gamma0 - ctx0.gamma_at(-c)) / ctx0.seed().weight(-c);
}

CovarianceCheck shift_covariance(double c, double gamma0, const FamilyContext& ctx0,
                                 std::optional<double> reference_gamma) {
  CovarianceCheck check{c, covariance_map(ctx0, c, gamma0), kNaN, kNaN};
  if (reference_gamma) {
    check.reference_gamma = *reference_gamma;
    check.discrepancy = std::abs(check.mapped_gamma - *reference_gamma) / std::abs(*reference_gamma);
  }
  return check;
}

}  // namespace susydw
