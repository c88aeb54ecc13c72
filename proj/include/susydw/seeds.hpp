#pragma once

#include <memory>
#include <string>

namespace susydw {

/// Closed interval [lo, hi] on the position axis.
struct Interval {
  double lo;
  double hi;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class SeedKind { quartic, razavy };

const char* to_string(SeedKind kind);

/// A particular solution F of the Riccati equation F' + F^2 = V2 - eps_f
/// together with the analytic quantities derived from it. Units: hbar = 1,
/// 2m = 1.
///
/// The gamma-integrand ("weight") is exp(log_weight) and always equals
/// exp(-2 int_0^x F) up to a seed-specific constant factor.
class RiccatiSeed {
 public:
  virtual ~RiccatiSeed() = default;

  virtual SeedKind kind() const = 0;
  virtual double shift() const = 0;

  virtual double f(double x) const = 0;
  virtual double f_prime(double x) const = 0;
  /// int_0^x F, closed form.
  virtual double int_f(double x) const = 0;
  virtual double v1(double x) const = 0;
  virtual double v2(double x) const { return v1(x) + 2.0 * f_prime(x); }
  virtual double log_weight(double x) const = 0;
  virtual double factorization_energy() const = 0;
  /// Working domain covering every feature of the family.
  virtual Interval default_domain() const = 0;

  double weight(double x) const;
  std::string name() const { return to_string(kind()); }
};

/// F(x) = (x - c)^2 - 1, weight = exp(-2 int_0^x F) so weight(0) = 1.
class QuarticSeed final : public RiccatiSeed {
 public:
  explicit QuarticSeed(double c);

  SeedKind kind() const override { return SeedKind::quartic; }
  double shift() const override { return c_; }
  double f(double x) const override;
  double f_prime(double x) const override;
  double int_f(double x) const override;
  double v1(double x) const override;
  double v2(double x) const override;
  double log_weight(double x) const override;
  double factorization_energy() const override { return 0.0; }
  Interval default_domain() const override;

 private:
  double c_;
};

/// Parameters of the three-parameter hyperbolic double well
/// V(x) = beta^2 [xi^2/8 cosh 4 beta x - (n + 1) xi cosh 2 beta x - xi^2/8].
struct RazavyParameters {
  double xi = 1.0;
  double beta = 1.0;
  int n = 2;
};

/// Hyperbolic double well with xi = 1, beta = 1, n = 2, translated by c.
///
/// The weight is the unnormalized ground-state density psi0(x - c)^2 with
/// psi0(u) = exp(-cosh(2u)/4) [1 + (1 + sqrt 2) cosh 2u]; it equals
/// psi0(-c)^2 exp(-2 int_0^x F).
class RazavySeed final : public RiccatiSeed {
 public:
  /// Throws Unsupported unless params is (1, 1, 2).
  explicit RazavySeed(double c, RazavyParameters params = {});

  /// -2 (1 + sqrt 2), the ground-state energy for n = 2.
  static double ground_energy();

  SeedKind kind() const override { return SeedKind::razavy; }
  double shift() const override { return c_; }
  const RazavyParameters& parameters() const { return params_; }

  double f(double x) const override;
  double f_prime(double x) const override;
  double int_f(double x) const override;
  double v1(double x) const override;
  double log_weight(double x) const override;
  double factorization_energy() const override { return ground_energy(); }
  Interval default_domain() const override;

  /// Unnormalized ground state psi0(x - c).
  double ground_state(double x) const;

 private:
  double log_ground_state(double x) const;

  double c_;
  RazavyParameters params_;
};

std::shared_ptr<const RiccatiSeed> quartic_seed(double c);
std::shared_ptr<const RiccatiSeed> razavy_seed(double c);
std::shared_ptr<const RiccatiSeed> make_seed(SeedKind kind, double c);

struct SeedBundle {
  double f;
  double f_prime;
  double v1;
  double v2;
  double log_weight;
};

/// Default ceiling on log_weight; exp(709) is the largest finite double.
inline constexpr double kLogWeightCap = 700.0;

/// All pointwise seed quantities at x. Throws Overflow when log_weight
/// exceeds cap and NonFinite when any value is not finite.
SeedBundle eval_bundle(const RiccatiSeed& seed, double x, double cap = kLogWeightCap);

}  // namespace susydw
