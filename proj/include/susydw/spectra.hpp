#pragma once

// Bound states of -psi'' + V psi = E psi (hbar = 1, 2m = 1) in a Dirichlet
// box, discretized by second-order central differences.

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "susydw/seeds.hpp"

namespace susydw {

struct SpectralProblem {
  std::function<double(double)> potential;
  Interval domain;
  /// Interior grid points; spacing is width / (n_points + 1).
  Eigen::Index n_points = 4000;
};

struct EigenResult {
  Eigen::VectorXd values;   ///< ascending
  Eigen::VectorXd grid;     ///< interior abscissae
  Eigen::MatrixXd vectors;  ///< column j: unit-norm eigenvector of level j
};

/// Lowest k eigenvalues and eigenvectors. Throws DomainTooSmall when any
/// returned eigenvector exceeds 1e-6 of its peak next to either wall.
EigenResult eigen_lowest(const SpectralProblem& problem, Eigen::Index k);

/// Interior sign changes of v, ignoring entries below tol * max|v|.
int count_nodes(const Eigen::VectorXd& v, double tol = 1e-10);

struct LevelComparison {
  double e_a;
  double e_b;
  double delta;  ///< e_b - e_a
};

struct IsospectralReport {
  /// 0: levels pair up directly. 1: the second spectrum lacks the first
  /// spectrum's ground level. -1: the first lacks the second's.
  int offset;
  double max_abs_delta;
  std::vector<LevelComparison> levels;
};

/// Aligns the lowest k levels of two potentials on a shared box, choosing
/// the offset (0, 1 or -1) that minimizes the largest |delta|.
IsospectralReport isospectral_report(const std::function<double(double)>& v_a,
                                     const std::function<double(double)>& v_b, Interval domain,
                                     Eigen::Index n_points, Eigen::Index k);

}  // namespace susydw
