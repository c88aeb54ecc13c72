#pragma once

// One-parameter isospectral family generated by a Riccati seed F.
//
// With gamma(x) = -int_0^x w (w the seed weight), the general Riccati
// solution is Phi_g = F + w / (gamma - gamma(x)). Each regular gamma gives a
// potential V_1gamma = V1 + 2 (Phi_g^2 - F^2) with the same spectrum as V1,
// and a zero mode Psi_0gamma = sqrt(w) / (gamma - gamma(x)).

#include <memory>
#include <optional>

#include <Eigen/Core>

#include "susydw/grid.hpp"
#include "susydw/seeds.hpp"

namespace susydw {

enum class NormMode { paper, l2 };

const char* to_string(NormMode mode);

struct FamilyOptions {
  /// Defaults to the seed's working domain.
  std::optional<Interval> domain;
  QuadSettings<double> quad{};
  int n_nodes = 2001;
  double log_weight_cap = kLogWeightCap;
};

/// Limit of gamma(x) beyond one edge of the domain.
struct Plateau {
  double edge;
  double gamma_at_edge;
  double weight_at_edge;
  /// Laplace estimate of int_edge^inf w, w(edge) / (2 |F(edge)|).
  double tail;
  /// True when the weight decays outward and the tail is negligible.
  bool exists;
  /// gamma_at_edge continued by the tail; meaningful only when exists.
  double value;
};

struct GammaRange {
  double inf;
  double sup;
};

/// Values of gamma for which gamma - gamma(x) never vanishes on the line.
struct RegularSet {
  std::optional<double> below;  ///< regular for gamma < *below
  std::optional<double> above;  ///< regular for gamma > *above

  bool contains(double gamma) const;
};

class FamilyContext {
 public:
  FamilyContext(std::shared_ptr<const RiccatiSeed> seed, Interval domain, QuadSettings<double> quad,
                SampledFunction<double> gamma_of_x, double log_weight_cap);

  const RiccatiSeed& seed() const { return *seed_; }
  const std::shared_ptr<const RiccatiSeed>& seed_ptr() const { return seed_; }
  Interval domain() const { return domain_; }
  const QuadSettings<double>& quad() const { return quad_; }
  double log_weight_cap() const { return log_weight_cap_; }

  /// gamma(x) tabulated on the build nodes.
  const SampledFunction<double>& gamma_of_x() const { return gamma_of_x_; }

  /// gamma(x) at arbitrary x: nearest tabulated node plus quadrature of the
  /// remainder. Points outside the domain are reached from the edge node.
  double gamma_at(double x) const;

  /// Extreme values of gamma(x) over the domain.
  GammaRange gamma_range() const;
  const Plateau& left_plateau() const { return left_; }
  const Plateau& right_plateau() const { return right_; }
  RegularSet regular_set() const;
  bool is_regular(double gamma) const { return regular_set().contains(gamma); }

 private:
  std::shared_ptr<const RiccatiSeed> seed_;
  Interval domain_;
  QuadSettings<double> quad_;
  SampledFunction<double> gamma_of_x_;
  double log_weight_cap_;
  Plateau left_;
  Plateau right_;
};

/// Tabulates gamma(x) on n_nodes uniform nodes and records the plateaus.
/// Requires domain.lo < 0 < domain.hi and n_nodes >= 201.
FamilyContext build_context(std::shared_ptr<const RiccatiSeed> seed, const FamilyOptions& options = {});

RegularSet regular_gamma_range(const FamilyContext& ctx);

struct EvalOptions {
  /// Evaluate inside the singular range instead of throwing SingularGamma.
  /// Nodes closer than 1e-10 |gamma| to a pole evaluate to NaN.
  bool allow_singular = false;
};

/// Throws SingularGamma unless gamma is regular or opts allow it.
void require_regular(const FamilyContext& ctx, double gamma, const EvalOptions& opts = {});

/// w(x) / (gamma - gamma(x)), i.e. Phi_g - F.
double deformation_ratio(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts = {});

double phi_general(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts = {});
double potential_member(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts = {});
double darboux_deformation(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts = {});

/// sqrt(w) / (gamma - gamma(x)) evaluated in log space.
double psi_unnormalized(const FamilyContext& ctx, double gamma, double x, const EvalOptions& opts = {});

struct NormOptions {
  NormMode mode = NormMode::l2;
  /// Lower limit l of |Gamma| = |int_l^inf w| in paper mode. When unset,
  /// the whole line is used for two-sided plateaus and c - 2.425 otherwise.
  std::optional<double> paper_lower_limit;
};

/// |Gamma| used by NormMode::paper.
double paper_gamma_total(const FamilyContext& ctx, std::optional<double> lower_limit = std::nullopt);

/// Factor multiplying psi_unnormalized: 1 / ||Psi||_2 on the domain (l2),
/// or sqrt(|gamma (gamma + 1)| / |Gamma|) (paper).
double zero_mode_norm(const FamilyContext& ctx, double gamma, const NormOptions& norm = {});

struct ZeroModeProfile {
  double gamma;
  NormMode norm_mode;
  double norm_constant;
  SampledFunction<double> samples;
  bool regular;
};

/// Normalized zero mode sampled on xs. Singular members (allow_singular) are
/// left unnormalized (norm_constant = 1) with poles masked as NaN.
ZeroModeProfile zero_mode(const FamilyContext& ctx, double gamma, const Eigen::VectorXd& xs,
                          const NormOptions& norm = {}, const EvalOptions& opts = {});

/// -Psi'' + (V_1gamma - eps_f) Psi at x, Psi'' by central differences.
double residual_schrodinger(const FamilyContext& ctx, double gamma, double x, double h);

/// Interval around the zero-mode peak outside of which |Psi| stays below
/// rel_amplitude times its peak. May extend up to `reach` past the domain.
Interval decay_interval(const FamilyContext& ctx, double gamma, double rel_amplitude = 1e-8,
                        double reach = 4.0);

}  // namespace susydw
