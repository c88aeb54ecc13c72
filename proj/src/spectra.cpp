#include "susydw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "susydw/errors.hpp"

namespace susydw {

namespace {

constexpr double kWallTolerance = 1e-6;

/// Solves (T - shift I) x = rhs for the symmetric tridiagonal T by the
/// Thomas algorithm. Pivots that vanish are nudged to keep the solve finite.
Eigen::VectorXd solve_shifted(const Eigen::VectorXd& diag, double off, double shift, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd c(n), d(n);
  const double tiny = 1e-300;
  double pivot = diag[0] - shift;
  if (std::abs(pivot) < tiny) pivot = tiny;
  c[0] = off / pivot;
  d[0] = rhs[0] / pivot;
  for (Eigen::Index i = 1; i < n; ++i) {
    pivot = diag[i] - shift - off * c[i - 1];
    if (std::abs(pivot) < tiny) pivot = tiny;
    c[i] = off / pivot;
    d[i] = (rhs[i] - off * d[i - 1]) / pivot;
  }
  Eigen::VectorXd x(n);
  x[n - 1] = d[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace

EigenResult eigen_lowest(const SpectralProblem& problem, Eigen::Index k) {
  const Eigen::Index n = problem.n_points;
  if (n < 200) throw InvalidArgument("eigen_lowest: n_points must be >= 200");
  if (k < 1 || k > n / 10) throw InvalidArgument("eigen_lowest: need 1 <= k << n_points");
  if (!(problem.domain.lo < problem.domain.hi)) throw InvalidArgument("eigen_lowest: empty domain");

  const double h = problem.domain.width() / double(n + 1);
  const double off = -1.0 / (h * h);
  EigenResult result;
  result.grid.resize(n);
  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = problem.domain.lo + h * double(i + 1);
    const double v = problem.potential(x);
    if (!std::isfinite(v)) throw NonFinite("potential not finite at x = " + std::to_string(x));
    result.grid[i] = x;
    diag[i] = 2.0 / (h * h) + v;
  }
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, off);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("tridiagonal eigensolver failed");
  result.values = solver.eigenvalues().head(k);

  result.vectors.resize(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double e = result.values[j];
    const double gap = (j + 1 < solver.eigenvalues().size()) ? solver.eigenvalues()[j + 1] - e : 1.0;
    const double shift = e + std::max(1e-12 * (1.0 + std::abs(e)), 1e-10 * gap);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (int it = 0; it < 3; ++it) {
      v = solve_shifted(diag, off, shift, v);
      v.normalize();
    }
    // Fix the sign so the largest component is positive.
    Eigen::Index arg;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    const double peak = v.cwiseAbs().maxCoeff();
    if (std::abs(v[0]) > kWallTolerance * peak || std::abs(v[n - 1]) > kWallTolerance * peak) {
      throw DomainTooSmall("eigenvector " + std::to_string(j) + " does not decay inside [" +
                           std::to_string(problem.domain.lo) + ", " + std::to_string(problem.domain.hi) + "]");
    }
    result.vectors.col(j) = v;
  }
  return result;
}

int count_nodes(const Eigen::VectorXd& v, double tol) {
  const double floor = tol * v.cwiseAbs().maxCoeff();
  int nodes = 0;
  int last_sign = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= floor) continue;
    const int sign = v[i] > 0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) ++nodes;
    last_sign = sign;
  }
  return nodes;
}

IsospectralReport isospectral_report(const std::function<double(double)>& v_a,
                                     const std::function<double(double)>& v_b, Interval domain,
                                     Eigen::Index n_points, Eigen::Index k) {
  const EigenResult a = eigen_lowest({v_a, domain, n_points}, k + 1);
  const EigenResult b = eigen_lowest({v_b, domain, n_points}, k + 1);
  IsospectralReport best{};
  for (int offset : {0, 1, -1}) {
    IsospectralReport r{offset, 0.0, {}};
    for (Eigen::Index i = 0; i < k; ++i) {
      const double ea = a.values[i + std::max(offset, 0)];
      const double eb = b.values[i + std::max(-offset, 0)];
      r.levels.push_back({ea, eb, eb - ea});
      r.max_abs_delta = std::max(r.max_abs_delta, std::abs(eb - ea));
    }
    if (offset == 0 || r.max_abs_delta < best.max_abs_delta) best = std::move(r);
  }
  return best;
}

}  // namespace susydw
