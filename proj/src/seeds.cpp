#include "susydw/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "susydw/errors.hpp"

namespace susydw {

const char* to_string(SeedKind kind) {
  switch (kind) {
    case SeedKind::quartic:
      return "quartic";
    case SeedKind::razavy:
      return "razavy";
  }
  return "unknown";
}

double RiccatiSeed::weight(double x) const { return std::exp(log_weight(x)); }

// ---------------------------------------------------------------------------
// Shifted quartic

QuarticSeed::QuarticSeed(double c) : c_(c) {
  if (!std::isfinite(c)) throw InvalidArgument("quartic seed: shift must be finite");
}

double QuarticSeed::f(double x) const {
  const double u = x - c_;
  return u * u - 1.0;
}

double QuarticSeed::f_prime(double x) const { return 2.0 * (x - c_); }

double QuarticSeed::int_f(double x) const {
  return x * x * x / 3.0 - c_ * x * x + (c_ * c_ - 1.0) * x;
}

double QuarticSeed::v1(double x) const {
  const double F = f(x);
  return F * F - f_prime(x);
}

double QuarticSeed::v2(double x) const {
  const double F = f(x);
  return F * F + f_prime(x);
}

double QuarticSeed::log_weight(double x) const { return -2.0 * int_f(x); }

Interval QuarticSeed::default_domain() const {
  return {std::min(c_ - 3.5, -0.5), std::max(c_ + 8.0, 0.5)};
}

// ---------------------------------------------------------------------------
// Razavy n = 2

namespace {

// eps_R in the Riccati form F = sinh(2u)/2 - 2 eps sinh(2u) / (eps cosh(2u) - 2).
constexpr double kRazavyEps = -2.0 * (1.0 + std::numbers::sqrt2);

}  // namespace

RazavySeed::RazavySeed(double c, RazavyParameters params) : c_(c), params_(params) {
  if (!std::isfinite(c)) throw InvalidArgument("razavy seed: shift must be finite");
  if (params.xi != 1.0 || params.beta != 1.0 || params.n != 2) {
    throw Unsupported("razavy seed: only xi = 1, beta = 1, n = 2 has a closed-form ground state");
  }
}

double RazavySeed::ground_energy() { return kRazavyEps; }

double RazavySeed::f(double x) const {
  const double u = 2.0 * (x - c_);
  const double s = std::sinh(u);
  return 0.5 * s - 2.0 * kRazavyEps * s / (kRazavyEps * std::cosh(u) - 2.0);
}

double RazavySeed::f_prime(double x) const {
  const double u = 2.0 * (x - c_);
  const double ch = std::cosh(u);
  const double den = kRazavyEps * ch - 2.0;
  return ch - 4.0 * kRazavyEps * (kRazavyEps - 2.0 * ch) / (den * den);
}

double RazavySeed::log_ground_state(double x) const {
  const double ch = std::cosh(2.0 * (x - c_));
  return -ch / 4.0 + std::log1p((1.0 + std::numbers::sqrt2) * ch);
}

double RazavySeed::ground_state(double x) const { return std::exp(log_ground_state(x)); }

double RazavySeed::int_f(double x) const {
  // F = -(ln psi0)'.
  return log_ground_state(0.0) - log_ground_state(x);
}

double RazavySeed::v1(double x) const {
  const double xi = params_.xi;
  const double beta = params_.beta;
  const double bx = beta * (x - c_);
  return beta * beta *
         (xi * xi / 8.0 * std::cosh(4.0 * bx) - (params_.n + 1) * xi * std::cosh(2.0 * bx) -
          xi * xi / 8.0);
}

double RazavySeed::log_weight(double x) const { return 2.0 * log_ground_state(x); }

Interval RazavySeed::default_domain() const {
  return {std::min(c_ - 4.5, -0.5), std::max(c_ + 4.5, 0.5)};
}

// ---------------------------------------------------------------------------

std::shared_ptr<const RiccatiSeed> quartic_seed(double c) { return std::make_shared<QuarticSeed>(c); }

std::shared_ptr<const RiccatiSeed> razavy_seed(double c) { return std::make_shared<RazavySeed>(c); }

std::shared_ptr<const RiccatiSeed> make_seed(SeedKind kind, double c) {
  return kind == SeedKind::quartic ? quartic_seed(c) : razavy_seed(c);
}

SeedBundle eval_bundle(const RiccatiSeed& seed, double x, double cap) {
  SeedBundle b{seed.f(x), seed.f_prime(x), seed.v1(x), seed.v2(x), seed.log_weight(x)};
  if (b.log_weight > cap) {
    throw Overflow("log_weight " + std::to_string(b.log_weight) + " exceeds cap at x = " +
                   std::to_string(x));
  }
  if (!std::isfinite(b.f) || !std::isfinite(b.f_prime) || !std::isfinite(b.v1) ||
      !std::isfinite(b.v2) || !std::isfinite(b.log_weight)) {
    throw NonFinite("seed quantities not finite at x = " + std::to_string(x));
  }
  return b;
}

}  // namespace susydw
