// Randomized invariants. Generators are seeded so failures reproduce.

#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "identities.hpp"
#include "oracle.hpp"
#include "susydw/analysis.hpp"
#include "susydw/spectra.hpp"

using namespace susydw;

namespace {

const FamilyContext& context(SeedKind kind, double c) {
  static std::map<std::pair<int, double>, FamilyContext> cache;
  const auto key = std::make_pair(static_cast<int>(kind), c);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_context(make_seed(kind, c))).first;
  return it->second;
}

/// Regular gamma: threshold times a log-uniform factor in [1.05, 100].
double draw_regular(std::mt19937& rng, const FamilyContext& ctx) {
  std::uniform_real_distribution<double> lf(std::log(1.05), std::log(100.0));
  std::bernoulli_distribution side(0.5);
  const RegularSet rs = ctx.regular_set();
  const bool use_above = rs.above && (!rs.below || side(rng));
  const double t = use_above ? *rs.above : *rs.below;
  return t * std::exp(lf(rng));
}

struct Case {
  SeedKind kind;
  double c;
};

Case draw_case(std::mt19937& rng) {
  std::uniform_int_distribution<int> k(0, 1), s(-1, 1);
  return {k(rng) ? SeedKind::razavy : SeedKind::quartic, static_cast<double>(s(rng))};
}

}  // namespace

TEST_CASE("property: family identities at random points") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const Case cs = draw_case(rng);
    const auto& ctx = context(cs.kind, cs.c);
    const double gamma = draw_regular(rng, ctx);
    const double norm = zero_mode_norm(ctx, gamma);
    std::uniform_real_distribution<double> ux(ctx.domain().lo, ctx.domain().hi);
    for (int k = 0; k < 20; ++k) {
      const double x = ux(rng);
      const auto r = identities::at(ctx, gamma, x, norm);
      INFO("seed " << to_string(cs.kind) << " c " << cs.c << " gamma " << gamma << " x " << x);
      CHECK(r.riccati < 1e-6);
      CHECK(r.bernoulli < 1e-6);
      CHECK(r.deformation_phi < 1e-5);
      CHECK(r.deformation_log < 1e-5);
      CHECK(r.log_derivative < 1e-6);
    }
  }
}

TEST_CASE("property: regular zero modes are nodeless and l2-normalized") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const Case cs = draw_case(rng);
    const auto& ctx = context(cs.kind, cs.c);
    const double gamma = draw_regular(rng, ctx);
    const auto xs = linspace<double>(ctx.domain().lo, ctx.domain().hi, 401);
    const auto prof = zero_mode(ctx, gamma, xs);
    CHECK(prof.regular);
    const auto& ys = prof.samples.ys();
    CHECK(((ys.array() >= 0.0).all() || (ys.array() <= 0.0).all()));
    CHECK(ys.cwiseAbs().maxCoeff() > 0.0);
    const Interval d = ctx.domain();
    const double mass = oracle::psi2_integral(gamma, ctx.gamma_at(d.lo), ctx.gamma_at(d.hi));
    CHECK(prof.norm_constant * prof.norm_constant * mass == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("property: extrema of Psi^2 lie on gamma*(x) = gamma") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const Case cs = draw_case(rng);
    const auto& ctx = context(cs.kind, cs.c);
    const double gamma = draw_regular(rng, ctx);
    const auto ext = zm_extrema(ctx, gamma);
    REQUIRE(!ext.empty());
    for (std::size_t i = 0; i < ext.size(); ++i) {
      CHECK(gamma_star(ctx, ext[i].x) == doctest::Approx(gamma).epsilon(1e-8));
      if (i > 0) CHECK(ext[i].kind != ext[i - 1].kind);
    }
    CHECK(ext.front().kind == ExtremumKind::max);
    CHECK(ext.back().kind == ExtremumKind::max);
  }
}

TEST_CASE("property: gamma(x) is decreasing and matches Simpson") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Case cs = draw_case(rng);
    const auto& ctx = context(cs.kind, cs.c);
    std::uniform_real_distribution<double> ux(ctx.domain().lo, ctx.domain().hi);
    double a = ux(rng), b = ux(rng);
    if (a > b) std::swap(a, b);
    CHECK(ctx.gamma_at(a) >= ctx.gamma_at(b));
    const auto w = [&](double x) { return ctx.seed().weight(x); };
    const double ref = oracle::gamma_of(w, b, 400000);
    CHECK(std::abs(ctx.gamma_at(b) - ref) < 1e-8 * (1.0 + std::abs(ref)));
  }
}

TEST_CASE("property: covariance map produces exact translates") {
  std::mt19937 rng(11);
  const auto& q0 = context(SeedKind::quartic, 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> s(-1, 1);
    const double c = (s(rng) == 0) ? 1.0 : static_cast<double>(s(rng));
    const double g0 = draw_regular(rng, q0);
    const auto& qc = context(SeedKind::quartic, c);
    const double gc = covariance_map(q0, c, g0);
    CHECK(qc.is_regular(gc));
    std::uniform_real_distribution<double> ux(-2.5, 3.0);
    for (int k = 0; k < 5; ++k) {
      const double x = ux(rng) + c;
      CHECK(potential_member(qc, gc, x) ==
            doctest::Approx(potential_member(q0, g0, x - c)).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("property: family members share the spectrum of V1") {
  std::mt19937 rng(3);
  const auto& q = context(SeedKind::quartic, 0.0);
  for (int trial = 0; trial < 3; ++trial) {
    const double gamma = draw_regular(rng, q);
    const Interval decay = decay_interval(q, gamma);
    const Interval box{decay.lo - 1.0, decay.hi + 1.0};
    const auto v1 = [&](double x) { return q.seed().v1(x); };
    const auto vg = [&](double x) { return potential_member(q, gamma, x); };
    const auto rep = isospectral_report(v1, vg, box, 3000, 3);
    INFO("gamma " << gamma);
    CHECK(rep.offset == -1);
    CHECK(rep.max_abs_delta < 2e-2);
  }
}
