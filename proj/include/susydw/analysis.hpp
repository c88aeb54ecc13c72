#pragma once

// Peak structure of the family zero modes: extrema from Phi_g = 0, the
// critical gamma where the two peaks of Psi^2 are equally high, anomalous
// localization (taller peak in the shallower well) and well probabilities.

#include <optional>
#include <vector>

#include "susydw/family.hpp"
#include "susydw/grid.hpp"

namespace susydw {

/// gamma*(x) = -w(x)/F(x) + gamma(x). A horizontal line gamma* = gamma
/// meets this curve at the extrema of Psi_0gamma. Throws
/// PoleAtTurningPoint where |F(x)| < 1e-12.
double gamma_star(const FamilyContext& ctx, double x);

struct ZeroModeExtremum {
  double x;
  ExtremumKind kind;  ///< of Psi^2
  double height;      ///< normalized Psi^2
};

/// Roots of Phi_g on the domain, classified as maxima/minima of Psi^2.
std::vector<ZeroModeExtremum> zm_extrema(const FamilyContext& ctx, double gamma, const NormOptions& norm = {},
                                         int n_scan = 2001);

/// The two tallest maxima (ordered by x) and the lowest minimum between them.
struct PeakPair {
  ZeroModeExtremum left;
  ZeroModeExtremum right;
  ZeroModeExtremum split;
};

/// Throws OnePeak when fewer than two maxima exist.
PeakPair dominant_peaks(const FamilyContext& ctx, double gamma, const NormOptions& norm = {});

struct CriticalGamma {
  double gamma;
  /// Threshold the search started from (the plateau on that side).
  double threshold;
  PeakPair peaks;
};

/// Equal-height parameter found by expanding geometrically away from each
/// finite regular threshold (x2 steps up to 1e6 |threshold|) and bisecting
/// the first sign change of (h_left - h_right) / (h_left + h_right).
/// Throws NoCrossing when no side changes sign.
CriticalGamma critical_gamma(const FamilyContext& ctx);

struct Well {
  double x;
  double depth;  ///< V_1gamma at the minimum
};

struct WellPair {
  Well left;
  Well right;
  /// true when the left well is the shallower one.
  bool left_is_shallower;
};

/// The two lowest local minima of V_1gamma, ordered by x. Equal minima are
/// separated by the area below the barrier top; Degenerate when that also
/// ties or fewer than two minima exist.
WellPair find_wells(const FamilyContext& ctx, double gamma);

/// True iff the zero-mode peak in the shallower well is the taller one.
bool alr_classify(const FamilyContext& ctx, double gamma);

struct LocalizationReport {
  double gamma;
  NormMode norm_mode;
  double norm_constant;
  Interval window;
  double split_x;
  double p_left;
  double p_right;
  std::vector<ZeroModeExtremum> peaks;
  bool anomalous;
};

/// Probabilities of the normalized zero mode on either side of the interior
/// minimum. The default window is the working domain in l2 mode and
/// [c - 3, c + 3] in paper mode.
LocalizationReport localization(const FamilyContext& ctx, double gamma, const NormOptions& norm = {},
                                 std::optional<Interval> window = std::nullopt);

struct CovarianceCheck {
  double c;
  double mapped_gamma;
  double reference_gamma;
  /// |mapped - reference| / |reference|; NaN without a reference.
  double discrepancy;
};

/// Parameter of the shift-c quartic family member that is the exact
/// translate of the c = 0 member at gamma0:
/// (gamma0 - gamma_0(-c)) / w_0(-c).
double covariance_map(const FamilyContext& ctx0, double c, double gamma0);

/// ctx0 must be built on the unshifted quartic seed.
CovarianceCheck shift_covariance(double c, double gamma0, const FamilyContext& ctx0,
                                 std::optional<double> reference_gamma = std::nullopt);

}  // namespace susydw
