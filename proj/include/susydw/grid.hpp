#pragma once

// Numeric kernel shared by every other module: adaptive Gauss-Kronrod
// quadrature, cumulative integrals on a grid, bracketed root finding,
// extremum location and central finite differences. Everything here is a
// pure function of its arguments and is templated on the scalar type.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "susydw/errors.hpp"

namespace susydw {

template <typename Scalar = double>
struct QuadSettings {
  Scalar abs_tol = Scalar(1e-10);
  Scalar rel_tol = Scalar(1e-10);
  int max_depth = 60;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || max_depth < 10) {
      throw InvalidArgument("QuadSettings: need abs_tol > 0, rel_tol > 0, max_depth >= 10");
    }
  }
};

/// Tabulated function on strictly increasing abscissae.
///
/// Evaluation between nodes uses the cubic Lagrange polynomial through the
/// four nearest nodes (quadratic/linear when fewer nodes exist). Evaluation
/// outside [front, back] throws InvalidArgument.
template <typename Scalar = double>
class SampledFunction {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SampledFunction(Vector xs, Vector ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2) {
      throw InvalidArgument("SampledFunction: xs and ys must have equal length >= 2");
    }
    for (Eigen::Index i = 1; i < xs_.size(); ++i) {
      if (!(xs_[i] > xs_[i - 1])) throw InvalidArgument("SampledFunction: xs not strictly increasing");
    }
  }

  const Vector& xs() const { return xs_; }
  const Vector& ys() const { return ys_; }
  Eigen::Index size() const { return xs_.size(); }
  Scalar front() const { return xs_[0]; }
  Scalar back() const { return xs_[xs_.size() - 1]; }

  /// Index i of the panel [xs[i], xs[i+1]] containing x.
  Eigen::Index panel(Scalar x) const {
    const auto* begin = xs_.data();
    const auto* end = begin + xs_.size();
    auto it = std::upper_bound(begin, end, x);
    Eigen::Index i = static_cast<Eigen::Index>(it - begin) - 1;
    return std::clamp<Eigen::Index>(i, 0, xs_.size() - 2);
  }

  Scalar operator()(Scalar x) const {
    if (x < front() || x > back()) throw InvalidArgument("SampledFunction: x outside tabulated range");
    const Eigen::Index n = xs_.size();
    const Eigen::Index stencil = std::min<Eigen::Index>(4, n);
    Eigen::Index start = panel(x) - (stencil / 2 - 1);
    start = std::clamp<Eigen::Index>(start, 0, n - stencil);
    Scalar sum = 0;
    for (Eigen::Index j = start; j < start + stencil; ++j) {
      Scalar basis = 1;
      for (Eigen::Index m = start; m < start + stencil; ++m) {
        if (m != j) basis *= (x - xs_[m]) / (xs_[j] - xs_[m]);
      }
      sum += basis * ys_[j];
    }
    return sum;
  }

 private:
  Vector xs_;
  Vector ys_;
};

namespace detail {

template <typename Scalar>
struct KronrodRule {
  static constexpr std::array<long double, 8> nodes = {
      0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
      0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
      0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
      0.207784955007898467600689403773245L, 0.0L};
  static constexpr std::array<long double, 8> kronrod = {
      0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
      0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
      0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
      0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
  // Gauss weights for nodes[1], nodes[3], nodes[5] and the centre.
  static constexpr std::array<long double, 4> gauss = {
      0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
      0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
};

template <typename Scalar>
inline Scalar checked(Scalar v) {
  if (!std::isfinite(v)) throw NonFinite("integrand returned a non-finite value");
  return v;
}

/// One G7-K15 panel: returns {kronrod estimate, |kronrod - gauss|}.
template <typename Scalar, typename F>
std::pair<Scalar, Scalar> gk15(const F& f, Scalar a, Scalar b) {
  using Rule = KronrodRule<Scalar>;
  const Scalar centre = (a + b) / 2;
  const Scalar half = (b - a) / 2;
  const Scalar fc = checked<Scalar>(f(centre));
  Scalar kron = Scalar(Rule::kronrod[7]) * fc;
  Scalar gauss = Scalar(Rule::gauss[3]) * fc;
  for (int j = 0; j < 7; ++j) {
    const Scalar dx = half * Scalar(Rule::nodes[j]);
    const Scalar pair = checked<Scalar>(f(centre - dx)) + checked<Scalar>(f(centre + dx));
    kron += Scalar(Rule::kronrod[j]) * pair;
    if (j % 2 == 1) gauss += Scalar(Rule::gauss[j / 2]) * pair;
  }
  return {kron * half, std::abs((kron - gauss) * half)};
}

template <typename Scalar, typename F>
Scalar adapt(const F& f, Scalar a, Scalar b, Scalar estimate, Scalar error, Scalar tol, int depth,
             int max_depth) {
  const Scalar floor = 50 * std::numeric_limits<Scalar>::epsilon() * std::abs(estimate);
  if (error <= tol || error <= floor) return estimate;
  if (depth >= max_depth) {
    throw NonConvergence("adaptive quadrature reached max_depth on [" + std::to_string(double(a)) +
                         ", " + std::to_string(double(b)) + "]");
  }
  const Scalar mid = (a + b) / 2;
  const auto [left, left_err] = gk15<Scalar>(f, a, mid);
  const auto [right, right_err] = gk15<Scalar>(f, mid, b);
  return adapt<Scalar>(f, a, mid, left, left_err, tol / 2, depth + 1, max_depth) +
         adapt<Scalar>(f, mid, b, right, right_err, tol / 2, depth + 1, max_depth);
}

/// Neumaier compensated running sum.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar v) {
    const Scalar t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_ = 0;
  Scalar comp_ = 0;
};

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b] with panel
/// bisection. Meets max(abs_tol, rel_tol * |I|) for smooth integrands.
template <typename Scalar, typename F>
Scalar integrate(const F& f, Scalar a, Scalar b, const QuadSettings<Scalar>& q = {}) {
  if (!(a <= b)) throw InvalidArgument("integrate: need a <= b");
  if (a == b) return Scalar(0);
  const auto [estimate, error] = detail::gk15<Scalar>(f, a, b);
  const Scalar tol = std::max(q.abs_tol, q.rel_tol * std::abs(estimate));
  return detail::adapt<Scalar>(f, a, b, estimate, error, tol, 0, q.max_depth);
}

/// Running integral of f from x0 to each node of xs. Panels are
/// accumulated outward from x0 with compensated summation so that values at
/// neighbouring nodes share their common prefix exactly.
template <typename Scalar, typename F>
SampledFunction<Scalar> cumulative(const F& f, Scalar x0,
                                   const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& xs,
                                   const QuadSettings<Scalar>& q = {}) {
  const Eigen::Index n = xs.size();
  if (n < 2) throw InvalidArgument("cumulative: need at least two nodes");
  for (Eigen::Index i = 1; i < n; ++i) {
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument("cumulative: nodes not strictly increasing");
  }
  if (x0 < xs[0] || x0 > xs[n - 1]) throw InvalidArgument("cumulative: x0 not bracketed by nodes");

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ys(n);
  // First node at or right of x0.
  Eigen::Index pivot = static_cast<Eigen::Index>(std::lower_bound(xs.data(), xs.data() + n, x0) - xs.data());

  detail::CompensatedSum<Scalar> right;
  Scalar prev = x0;
  for (Eigen::Index i = pivot; i < n; ++i) {
    right.add(integrate<Scalar>(f, prev, xs[i], q));
    ys[i] = right.value();
    prev = xs[i];
  }
  detail::CompensatedSum<Scalar> left;
  prev = x0;
  for (Eigen::Index i = pivot - 1; i >= 0; --i) {
    left.add(-integrate<Scalar>(f, xs[i], prev, q));
    ys[i] = left.value();
    prev = xs[i];
  }
  return SampledFunction<Scalar>(xs, std::move(ys));
}

namespace detail {

/// Bisection on a sign-changing bracket until it cannot shrink further.
template <typename Scalar, typename F>
Scalar bisect(const F& f, Scalar lo, Scalar hi, Scalar f_lo) {
  for (int it = 0; it < 200; ++it) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const Scalar f_mid = f(mid);
    if (f_mid == 0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + (hi - lo) / 2;
}

}  // namespace detail

/// Roots of f on [a, b]: one per sign change on a uniform scan mesh of
/// n_scan points, refined by bisection to the resolution of Scalar.
///
/// Tangent roots (no sign change) are not detected. Non-finite samples break
/// brackets. A refined point whose |f| exceeds both bracket ends is a pole,
/// not a root, and is dropped.
template <typename Scalar, typename F>
std::vector<Scalar> find_roots(const F& f, Scalar a, Scalar b, int n_scan = 2001) {
  if (n_scan < 2) throw InvalidArgument("find_roots: n_scan must be >= 2");
  if (!(a < b)) throw InvalidArgument("find_roots: need a < b");
  std::vector<Scalar> xs(n_scan), fs(n_scan);
  const Scalar step = (b - a) / Scalar(n_scan - 1);
  for (int i = 0; i < n_scan; ++i) {
    xs[i] = (i == n_scan - 1) ? b : a + step * Scalar(i);
    fs[i] = f(xs[i]);
  }
  std::vector<Scalar> roots;
  for (int i = 0; i < n_scan; ++i) {
    if (fs[i] == 0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 == n_scan || fs[i + 1] == 0) continue;
    if (!std::isfinite(fs[i]) || !std::isfinite(fs[i + 1])) continue;
    if (std::signbit(fs[i]) == std::signbit(fs[i + 1])) continue;
    const Scalar r = detail::bisect<Scalar>(f, xs[i], xs[i + 1], fs[i]);
    const Scalar fr = std::abs(f(r));
    if (!(fr <= std::min(std::abs(fs[i]), std::abs(fs[i + 1])))) continue;
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Central second difference (f(x-h) - 2 f(x) + f(x+h)) / h^2.
template <typename Scalar, typename F>
Scalar fd_second(const F& f, Scalar x, Scalar h) {
  if (!(h > 0)) throw InvalidArgument("fd_second: need h > 0");
  return (f(x - h) - 2 * f(x) + f(x + h)) / (h * h);
}

/// Central first difference (f(x+h) - f(x-h)) / (2h).
template <typename Scalar, typename F>
Scalar fd_first(const F& f, Scalar x, Scalar h) {
  if (!(h > 0)) throw InvalidArgument("fd_first: need h > 0");
  return (f(x + h) - f(x - h)) / (2 * h);
}

enum class ExtremumKind { max, min };

inline const char* to_string(ExtremumKind k) { return k == ExtremumKind::max ? "max" : "min"; }

template <typename Scalar = double>
struct Extremum {
  Scalar x;
  ExtremumKind kind;
};

/// Interior extrema of f on [a, b]: roots of a centred finite-difference
/// derivative, classified by the sign of the second difference. f is only
/// sampled inside [a, b]. Inflection points (vanishing second difference)
/// are skipped.
template <typename Scalar, typename F>
std::vector<Extremum<Scalar>> find_extrema(const F& f, Scalar a, Scalar b, int n_scan = 2001) {
  if (!(a < b)) throw InvalidArgument("find_extrema: need a < b");
  const Scalar spacing = (b - a) / Scalar(std::max(n_scan - 1, 1));
  const Scalar h = spacing * Scalar(1e-3);
  auto derivative = [&](Scalar x) { return fd_first<Scalar>(f, x, h); };
  std::vector<Extremum<Scalar>> out;
  for (Scalar r : find_roots<Scalar>(derivative, a + h, b - h, n_scan)) {
    const Scalar h2 = std::min({spacing, r - a, b - r});
    if (!(h2 > 0)) continue;
    const Scalar curvature = fd_second<Scalar>(f, r, h2);
    if (curvature < 0) {
      out.push_back({r, ExtremumKind::max});
    } else if (curvature > 0) {
      out.push_back({r, ExtremumKind::min});
    }
  }
  return out;
}

/// n equally spaced points covering [a, b] inclusive.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> linspace(Scalar a, Scalar b, Eigen::Index n) {
  if (n < 2) throw InvalidArgument("linspace: need n >= 2");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> xs =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::LinSpaced(n, a, b);
  xs[n - 1] = b;
  return xs;
}

}  // namespace susydw
