#include "susydw/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "susydw/errors.hpp"

namespace susydw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr double kPsiFloor = 1e-300;
constexpr double kPlateauTailTolerance = 1e-6;
constexpr double kPaperLowerLimitOffset = -2.425;

Plateau make_plateau(const RiccatiSeed& seed, double edge, double gamma_at_edge, bool right_edge) {
  Plateau p{};
  p.edge = edge;
  p.gamma_at_edge = gamma_at_edge;
  p.weight_at_edge = seed.weight(edge);
  const double F = seed.f(edge);
  // (ln w)' = -2F, so w decays to the right when F > 0, to the left when F < 0.
  const bool decays = right_edge ? F > 0 : F < 0;
  p.tail = decays ? p.weight_at_edge / (2.0 * std::abs(F)) : std::numeric_limits<double>::infinity();
  p.exists = decays && p.tail <= kPlateauTailTolerance * std::max(1.0, std::abs(gamma_at_edge));
  p.value = right_edge ? gamma_at_edge - p.tail : gamma_at_edge + p.tail;
  return p;
}

double signed_exp(double sign_source, double log_magnitude) {
  const double mag = std::exp(log_magnitude);
  return std::signbit(sign_source) ? -mag : mag;
}

bool is_pole(double denominator, double gamma) {
  return denominator == 0.0 || std::abs(denominator) < 1e-10 * std::abs(gamma);
}

}  // namespace

const char* to_string(NormMode mode) { return mode == NormMode::paper ? "paper" : "l2"; }

bool RegularSet::contains(double gamma) const {
  if (!std::isfinite(gamma)) return false;
  return (below && gamma < *below) || (above && gamma > *above);
}

FamilyContext::FamilyContext(std::shared_ptr<const RiccatiSeed> seed, Interval domain,
                             QuadSettings<double> quad, SampledFunction<double> gamma_of_x,
                             double log_weight_cap)
    : seed_(std::move(seed)),
      domain_(domain),
      quad_(quad),
      gamma_of_x_(std::move(gamma_of_x)),
      log_weight_cap_(log_weight_cap) {
  const auto& ys = gamma_of_x_.ys();
  left_ = make_plateau(*seed_, domain_.lo, ys[0], false);
  right_ = make_plateau(*seed_, domain_.hi, ys[ys.size() - 1], true);
}

double FamilyContext::gamma_at(double x) const {
  const auto& xs = gamma_of_x_.xs();
  const auto& ys = gamma_of_x_.ys();
  Eigen::Index i = gamma_of_x_.panel(x);
  if (i + 1 < xs.size() && std::abs(xs[i + 1] - x) < std::abs(x - xs[i])) ++i;
  const double node = xs[i];
  const auto w = [this](double t) {
    const double lw = seed_->log_weight(t);
    if (lw > log_weight_cap_) throw Overflow("log_weight exceeds cap at x = " + std::to_string(t));
    return std::exp(lw);
  };
  if (x >= node) return ys[i] - integrate<double>(w, node, x, quad_);
  return ys[i] + integrate<double>(w, x, node, quad_);
}

GammaRange FamilyContext::gamma_range() const {
  const auto& ys = gamma_of_x_.ys();
  return {ys.minCoeff(), ys.maxCoeff()};
}

RegularSet FamilyContext::regular_set() const {
  RegularSet set;
  // gamma(x) decreases, so the right edge bounds it from below.
  if (right_.exists) set.below = right_.value;
  if (left_.exists) set.above = left_.value;
  return set;
}

FamilyContext build_context(std::shared_ptr<const RiccatiSeed> seed, const FamilyOptions& options) {
  if (!seed) throw InvalidArgument("build_context: null seed");
  const Interval domain = options.domain.value_or(seed->default_domain());
  if (!(domain.lo < 0.0 && 0.0 < domain.hi)) {
    throw InvalidArgument("build_context: domain must satisfy a < 0 < b");
  }
  if (options.n_nodes < 201) throw InvalidArgument("build_context: n_nodes must be >= 201");
  options.quad.validate();

  // Uniform nodes with x = 0 inserted so that gamma(0) = 0 is stored exactly.
  Eigen::VectorXd uniform = linspace<double>(domain.lo, domain.hi, options.n_nodes);
  std::vector<double> nodes(uniform.data(), uniform.data() + uniform.size());
  const double spacing = domain.width() / (options.n_nodes - 1);
  auto nearest = std::min_element(nodes.begin(), nodes.end(),
                                  [](double a, double b) { return std::abs(a) < std::abs(b); });
  if (std::abs(*nearest) < 1e-9 * spacing) {
    *nearest = 0.0;
  } else {
    nodes.insert(std::upper_bound(nodes.begin(), nodes.end(), 0.0), 0.0);
  }
  Eigen::VectorXd xs = Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));

  for (double x : nodes) {
    const double lw = seed->log_weight(x);
    if (lw > options.log_weight_cap) {
      throw Overflow("build_context: log_weight " + std::to_string(lw) + " exceeds cap at x = " +
                     std::to_string(x) + "; shrink the domain");
    }
  }

  const auto weight = [&seed](double t) { return seed->weight(t); };
  SampledFunction<double> integral = cumulative<double>(weight, 0.0, xs, options.quad);
  Eigen::VectorXd gamma = -integral.ys();
  for (Eigen::Index i = 1; i < gamma.size(); ++i) {
    if (gamma[i] > gamma[i - 1]) throw NonConvergence("build_context: gamma(x) is not monotone");
  }
  return FamilyContext(std::move(seed), domain, options.quad, SampledFunction<double>(xs, gamma),
                       options.log_weight_cap);
}

RegularSet regular_gamma_range(const FamilyContext& ctx) { return ctx.regular_set(); }

void require_regular(const FamilyContext& ctx, double gamma, const EvalOptions& opts) {
  if (opts.allow_singular) return;
  if (!ctx.is_regular(gamma)) {
    throw SingularGamma("gamma = " + std::to_string(gamma) +
                        " intersects gamma(x); the family member is singular");
  }
}

double deformation_ratio(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts) {
  require_regular(ctx, gamma, opts);
  const double denominator = gamma - ctx.gamma_at(x);
  if (opts.allow_singular && is_pole(denominator, gamma)) return kNaN;
  const double lw = ctx.seed().log_weight(x);
  return signed_exp(denominator, lw - std::log(std::abs(denominator)));
}

double phi_general(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts) {
  return ctx.seed().f(x) + deformation_ratio(ctx, gamma, x, opts);
}

double darboux_deformation(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts) {
  const double q = deformation_ratio(ctx, gamma, x, opts);
  return 2.0 * q * (2.0 * ctx.seed().f(x) + q);
}

double potential_member(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts) {
  return ctx.seed().v1(x) + darboux_deformation(ctx, gamma, x, opts);
}

double psi_unnormalized(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts) {
  require_regular(ctx, gamma, opts);
  const double denominator = gamma - ctx.gamma_at(x);
  if (opts.allow_singular && is_pole(denominator, gamma)) return kNaN;
  const double lw = ctx.seed().log_weight(x);
  const double psi = signed_exp(denominator, 0.5 * lw - std::log(std::abs(denominator)));
  return std::abs(psi) < kPsiFloor ? 0.0 : psi;
}

double paper_gamma_total(const FamilyContext& ctx, std::optional<double> lower_limit) {
  const RegularSet set = ctx.regular_set();
  if (!set.below) throw InvalidArgument("paper normalization needs a plateau of gamma(x) on the right");
  if (!lower_limit && set.above) return std::abs(*set.above - *set.below);
  const double l = lower_limit.value_or(ctx.seed().shift() + kPaperLowerLimitOffset);
  return std::abs(ctx.gamma_at(l) - *set.below);
}

double zero_mode_norm(const FamilyContext& ctx, double gamma, const NormOptions& norm) {
  if (norm.mode == NormMode::paper) {
    return std::sqrt(std::abs(gamma * (gamma + 1.0)) / paper_gamma_total(ctx, norm.paper_lower_limit));
  }
  require_regular(ctx, gamma);
  const auto psi2 = [&](double x) {
    const double p = psi_unnormalized(ctx, gamma, x);
    return p * p;
  };
  // Chunked so each adaptive call sees at most one peak.
  constexpr int kChunks = 64;
  const Interval d = ctx.domain();
  detail::CompensatedSum<double> total;
  for (int k = 0; k < kChunks; ++k) {
    const double a = d.lo + d.width() * k / kChunks;
    const double b = (k + 1 == kChunks) ? d.hi : d.lo + d.width() * (k + 1) / kChunks;
    total.add(integrate<double>(psi2, a, b, ctx.quad()));
  }
  return 1.0 / std::sqrt(total.value());
}

ZeroModeProfile zero_mode(const FamilyContext& ctx, double gamma, const Eigen::VectorXd& xs,
                          const NormOptions& norm, const EvalOptions& opts) {
  require_regular(ctx, gamma, opts);
  const bool regular = ctx.is_regular(gamma);
  const double constant = regular ? zero_mode_norm(ctx, gamma, norm) : 1.0;
  Eigen::VectorXd ys(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    ys[i] = constant * psi_unnormalized(ctx, gamma, xs[i], opts);
  }
  return {gamma, norm.mode, constant, SampledFunction<double>(xs, std::move(ys)), regular};
}

double residual_schrodinger(const FamilyContext& ctx, double gamma, double x, double h) {
  const auto psi = [&](double t) { return psi_unnormalized(ctx, gamma, t); };
  const double energy = ctx.seed().factorization_energy();
  return -fd_second<double>(psi, x, h) + (potential_member(ctx, gamma, x) - energy) * psi(x);
}

Interval decay_interval(const FamilyContext& ctx, double gamma, double rel_amplitude, double reach) {
  require_regular(ctx, gamma);
  const Interval d = ctx.domain();
  constexpr int kScan = 2001;
  const double step = d.width() / (kScan - 1);
  double peak_x = d.lo;
  double peak = 0.0;
  for (int i = 0; i < kScan; ++i) {
    const double x = d.lo + step * i;
    const double p = std::abs(psi_unnormalized(ctx, gamma, x));
    if (p > peak) {
      peak = p;
      peak_x = x;
    }
  }
  const double threshold = rel_amplitude * peak;
  const auto walk = [&](double direction, double limit) {
    double x = peak_x;
    while ((direction < 0 ? x > limit : x < limit)) {
      x += direction * step;
      if (std::abs(psi_unnormalized(ctx, gamma, x)) < threshold) return x;
    }
    return limit;
  };
  return {walk(-1.0, d.lo - reach), walk(1.0, d.hi + reach)};
}

}  // namespace susydw
