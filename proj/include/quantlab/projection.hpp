#ifndef QUANTLAB_PROJECTION_HPP_
#define QUANTLAB_PROJECTION_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/norms.hpp"

namespace quantlab {

struct SolverOptions {
  /// Convergence threshold on the scaled KKT residual (dimensionless, in units of tau).
  double tol = 1e-10;
  /// A coordinate within eps_active_rel * tau of a face is active.
  double eps_active_rel = 1e-9;
  int max_iterations = 500;
  /// Feasible starting point in coordinates of C(0); defaults to the box center.
  std::optional<Vector> start;
};

/// Signed active set: -1 at the lower face, +1 at the upper face, 0 free.
struct FacePattern {
  std::vector<std::int8_t> s;

  FacePattern() = default;
  explicit FacePattern(std::vector<std::int8_t> signs) : s(std::move(signs)) {}

  int size() const { return static_cast<int>(s.size()); }
  int K() const {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [](auto v) { return v != 0; }));
  }
  std::vector<int> support() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
      if (s[static_cast<std::size_t>(i)] != 0) out.push_back(i);
    return out;
  }
  int operator[](int i) const { return s[static_cast<std::size_t>(i)]; }

  friend bool operator==(const FacePattern&, const FacePattern&) = default;
  friend auto operator<=>(const FacePattern&, const FacePattern&) = default;
};

struct SolveResult {
  Vector minimizer;         ///< ambient vector
  Vector minimizer_coords;  ///< basis coordinates
  FacePattern pattern;
  /// Coordinate gradient of the degree-2 surrogate objective at the minimizer.
  Vector grad_at_min;
  /// Curvature scale times tau; grad_at_min / gradient_scale is dimensionless.
  double gradient_scale = 1.0;
  double kkt_residual = 0.0;
  int iterations = 0;
  /// An active face with a vanishing gradient component: the face side is
  /// not determined by first-order conditions.
  bool degenerate = false;
};

namespace detail {

/// g(c) = S(M (c - offset)) on basis coordinates c, with S the surrogate of f.
class CoordinateObjective {
 public:
  CoordinateObjective(const NormModel& f, const Basis& basis, Vector offset)
      : f_(f), offset_(std::move(offset)), identity_(f.frame() == Frame::coords) {
    if (!identity_) m_ = basis.matrix();
    if (f_.quadratic_surrogate()) {
      const Matrix hs = f_.surrogate_hessian(Vector::Zero(f_.dim()));
      constant_hessian_ = identity_ ? hs : Matrix(m_.transpose() * hs * m_);
    }
  }

  bool quadratic() const { return constant_hessian_.has_value(); }

  double value(const Vector& c) const { return f_.surrogate_value(arg(c)); }

  Vector gradient(const Vector& c) const {
    const Vector g = f_.surrogate_gradient(arg(c));
    return identity_ ? g : Vector(m_.transpose() * g);
  }

  Matrix hessian(const Vector& c) const {
    if (constant_hessian_) return *constant_hessian_;
    const Matrix h = f_.surrogate_hessian(arg(c));
    return identity_ ? h : Matrix(m_.transpose() * h * m_);
  }

  /// g(c) - g(c + delta), exact for quadratics (no cancellation).
  double decrease(const Vector& c, const Vector& grad, const Vector& delta) const {
    if (constant_hessian_) return -(grad.dot(delta) + 0.5 * delta.dot(*constant_hessian_ * delta));
    return value(c) - value(c + delta);
  }

 private:
  Vector arg(const Vector& c) const {
    if (identity_) return c - offset_;
    return m_ * (c - offset_);
  }

  const NormModel& f_;
  Vector offset_;
  bool identity_;
  Matrix m_;
  std::optional<Matrix> constant_hessian_;
};

inline double curvature_scale(const Matrix& h) {
  const double l = h.diagonal().maxCoeff();
  return (std::isfinite(l) && l > 0.0) ? l : 1.0;
}

inline Vector project(const Vector& c, double half) { return c.cwiseMax(-half).cwiseMin(half); }

inline double kkt_residual(const Vector& c, const Vector& g, double scale, double half,
                           double tau) {
  return (c - project(c - g / scale, half)).cwiseAbs().maxCoeff() / tau;
}

/// Like kkt_residual, but each coordinate's gradient is divided by its own
/// curvature when that is smaller than the global scale. Where the objective
/// flattens (p-power with p > 2 at a free optimum) the globally scaled
/// residual vanishes long before the iterate is close; this one does not.
inline double stopping_residual(const Vector& c, const Vector& g, const Matrix& h, double scale,
                                double half, double tau) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    const double hi = h(i, i) > 0.0 ? std::min(scale, h(i, i)) : scale;
    const double step = g(i) == 0.0 ? 0.0 : g(i) / hi;
    const double moved = std::clamp(c(i) - step, -half, half) - c(i);
    worst = std::max(worst, std::abs(moved));
  }
  return worst / tau;
}

/// Pattern, gradient and degeneracy flag at a box point.
inline void finalize(SolveResult& r, const CoordinateObjective& obj, double tau,
                     const SolverOptions& opt) {
  const int n = static_cast<int>(r.minimizer_coords.size());
  const double half = 0.5 * tau;
  const double eps = opt.eps_active_rel * tau;
  std::vector<std::int8_t> s(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    double& ci = r.minimizer_coords(i);
    if (ci >= half - eps) {
      s[static_cast<std::size_t>(i)] = 1;
      ci = half;
    } else if (ci <= -half + eps) {
      s[static_cast<std::size_t>(i)] = -1;
      ci = -half;
    }
  }
  r.pattern = FacePattern(std::move(s));
  r.grad_at_min = obj.gradient(r.minimizer_coords);
  const double scale = curvature_scale(obj.hessian(r.minimizer_coords));
  r.gradient_scale = scale * tau;
  r.kkt_residual = kkt_residual(r.minimizer_coords, r.grad_at_min, scale, half, tau);
  r.degenerate = false;
  for (int i : r.pattern.support())
    if (std::abs(r.grad_at_min(i)) / r.gradient_scale <= opt.eps_active_rel) r.degenerate = true;
}

/**
 * Projected Newton iteration on the box [-tau/2, tau/2]^N.
 *
 * Each step splits coordinates into an epsilon-binding set (at a face with
 * the gradient pushing outward) and a free set; free coordinates take a
 * Newton step on the reduced Hessian, binding ones a scaled gradient step,
 * and the combined step is projected back and backtracked until the Armijo
 * condition along the projection arc holds. For quadratic objectives the
 * iteration terminates once the active set is identified.
 */
inline SolveResult solve_box(const CoordinateObjective& obj, int n, double tau,
                             const SolverOptions& opt) {
  const double half = 0.5 * tau;
  constexpr double kArmijo = 1e-4;

  Vector c = opt.start ? project(*opt.start, half) : Vector::Zero(n);
  require(c.size() == n, ErrorCode::invalid_argument, "start point dimension mismatch");

  SolveResult r;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Vector g = obj.gradient(c);
    const Matrix h = obj.hessian(c);
    const double scale = curvature_scale(h);
    const double res = stopping_residual(c, g, h, scale, half, tau);
    if (res <= opt.tol) break;

    const double width = std::min(0.25 * tau, (c - project(c - g / scale, half)).cwiseAbs().maxCoeff());
    std::vector<int> free_idx;
    std::vector<bool> binding(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
      const bool at_lower = c(i) <= -half + width && g(i) > 0.0;
      const bool at_upper = c(i) >= half - width && g(i) < 0.0;
      binding[static_cast<std::size_t>(i)] = at_lower || at_upper;
      if (!binding[static_cast<std::size_t>(i)]) free_idx.push_back(i);
    }

    Vector d = -g / scale;
    bool newton = false;
    if (!free_idx.empty()) {
      const int m = static_cast<int>(free_idx.size());
      Matrix hff(m, m);
      Vector gf(m);
      for (int a = 0; a < m; ++a) {
        gf(a) = g(free_idx[a]);
        for (int b = 0; b < m; ++b) hff(a, b) = h(free_idx[a], free_idx[b]);
      }
      const Eigen::LDLT<Matrix> ldlt(hff);
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Vector df = -ldlt.solve(gf);
        if (df.allFinite() && gf.dot(df) < 0.0) {
          for (int a = 0; a < m; ++a) d(free_idx[a]) = df(a);
          newton = true;
        }
      }
    }

    auto line_search = [&](const Vector& dir, bool split) -> std::optional<Vector> {
      double alpha = 1.0;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        const Vector cn = project(c + alpha * dir, half);
        const Vector delta = cn - c;
        if (delta.cwiseAbs().maxCoeff() == 0.0) return std::nullopt;
        double predicted = 0.0;
        for (int i = 0; i < n; ++i) {
          if (split && !binding[static_cast<std::size_t>(i)])
            predicted += -alpha * g(i) * dir(i);
          else
            predicted += -g(i) * delta(i);
        }
        const double actual = obj.decrease(c, g, delta);
        if (actual >= kArmijo * predicted && actual >= 0.0) return cn;
        // Near convergence the decrease of a non-quadratic objective drowns
        // in rounding; accept a step that still reduces the KKT residual.
        if (!obj.quadratic() && std::abs(actual) <= 1e-13 * std::abs(obj.value(c))) {
          const Vector gn = obj.gradient(cn);
          if (stopping_residual(cn, gn, obj.hessian(cn), scale, half, tau) < res) return cn;
        }
      }
      return std::nullopt;
    };

    std::optional<Vector> next = line_search(d, newton);
    if (!next && newton) next = line_search(-g / scale, false);
    if (!next) break;
    c = *next;
  }

  r.minimizer_coords = c;
  r.iterations = it;
  return r;
}

inline void require_options(const SolverOptions& opt) {
  require(opt.tol > 0.0 && opt.eps_active_rel > 0.0 && opt.max_iterations > 0,
          ErrorCode::invalid_argument, "solver tolerances must be positive");
}

}  // namespace detail

/**
 * Minimizes f(v - u) over v in C(0), the box |v_i| <= tau/2 in basis
 * coordinates. Non-orthonormal bases are handled in coordinates: the
 * constraints stay axis-aligned and only the objective couples them.
 *
 * Throws MaxIterations if the KKT residual does not reach `opt.tol`, and
 * HypothesisViolation if `f` cannot serve as an objective.
 */
inline SolveResult solve_centered(const Vector& u, double tau, const NormModel& f,
                                  const Basis& basis, const SolverOptions& opt = {}) {
  require_tau(tau);
  detail::require_options(opt);
  require_objective(f);
  require(f.dim() == basis.dim(), ErrorCode::invalid_argument, "norm and basis dimensions differ");
  require(u.allFinite(), ErrorCode::non_finite_input, "input vector is not finite");

  const Vector a = basis.to_coords(u);
  const detail::CoordinateObjective obj(f, basis, a);
  SolveResult r = detail::solve_box(obj, basis.dim(), tau, opt);
  detail::finalize(r, obj, tau, opt);
  if (!(r.kkt_residual <= opt.tol))
    fail(ErrorCode::max_iterations, "box solver stopped after " + std::to_string(r.iterations) +
                                        " iterations with KKT residual " +
                                        std::to_string(r.kkt_residual));
  r.minimizer = basis.from_coords(r.minimizer_coords);
  return r;
}

/**
 * Minimizes f over the cell C(k). The cell problem is the centered problem
 * for the datum -center(k), translated by center(k): f(v + center) =
 * f(v - (-center)). The returned pattern refers to the faces of C(k).
 */
inline SolveResult solve_cell(const QuantIndex& k, double tau, const NormModel& f,
                              const Basis& basis, const SolverOptions& opt = {}) {
  const Vector center = cell_center(k, tau, basis);
  SolveResult r = solve_centered(-center, tau, f, basis, opt);
  r.minimizer_coords += tau * k.as_vector();
  r.minimizer = basis.from_coords(r.minimizer_coords);
  return r;
}

/// Whether the coordinate objective of f is a diagonal quadratic, so that
/// the box minimizer is a coordinatewise clamp.
inline bool clamp_applies(const NormModel& f, const Basis& basis) {
  if (f.kind() != NormKind::separable_quadratic) return false;
  if (f.frame() == Frame::coords) return true;
  const Matrix h = basis.matrix().transpose() * f.weights().asDiagonal() * basis.matrix();
  const double scale = h.diagonal().maxCoeff();
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j)
      if (i != j && std::abs(h(i, j)) > 1e-12 * scale) return false;
  return true;
}

/// Closed-form solution of the centered problem when the coordinate
/// objective is a diagonal quadratic (separable-quadratic f with an
/// orthogonal basis, or separable in coordinates).
inline SolveResult clamp_fast_path(const Vector& u, double tau, const NormModel& f,
                                   const Basis& basis, const SolverOptions& opt = {}) {
  require_tau(tau);
  require(clamp_applies(f, basis), ErrorCode::fast_path_unavailable,
          "clamp needs a separable-quadratic objective that is diagonal in basis coordinates");
  const Vector a = basis.to_coords(u);
  const detail::CoordinateObjective obj(f, basis, a);
  SolveResult r;
  r.minimizer_coords = detail::project(a, 0.5 * tau);
  r.iterations = 0;
  detail::finalize(r, obj, tau, opt);
  r.minimizer = basis.from_coords(r.minimizer_coords);
  return r;
}

/**
 * Minimizes the surrogate of f over the coordinates not listed in `fixed`,
 * holding the listed coordinates of `c` at their values. Used by the decoder
 * to rebuild the free part of a cell minimizer. Returns the full coordinate
 * vector.
 */
inline Vector minimize_free_coords(const NormModel& f, const Basis& basis, Vector c,
                                   const std::vector<bool>& fixed, int max_iterations = 200) {
  const int n = basis.dim();
  const detail::CoordinateObjective obj(f, basis, Vector::Zero(n));
  std::vector<int> free_idx;
  for (int i = 0; i < n; ++i)
    if (!fixed[static_cast<std::size_t>(i)]) free_idx.push_back(i);
  const int m = static_cast<int>(free_idx.size());
  if (m == 0) return c;

  for (int it = 0; it < max_iterations; ++it) {
    const Vector g = obj.gradient(c);
    const Matrix h = obj.hessian(c);
    Matrix hff(m, m);
    Vector gf(m);
    for (int a = 0; a < m; ++a) {
      gf(a) = g(free_idx[a]);
      for (int b = 0; b < m; ++b) hff(a, b) = h(free_idx[a], free_idx[b]);
    }
    const double scale = detail::curvature_scale(h);
    const double gnorm = gf.cwiseAbs().maxCoeff();
    if (gnorm <= 1e-15 * scale * std::max(1.0, c.cwiseAbs().maxCoeff())) break;
    const Eigen::LDLT<Matrix> ldlt(hff);
    Vector df = -gf / scale;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Vector nd = -ldlt.solve(gf);
      if (nd.allFinite() && nd.dot(gf) < 0.0) df = nd;
    }
    Vector delta = Vector::Zero(n);
    for (int a = 0; a < m; ++a) delta(free_idx[a]) = df(a);
    if (obj.quadratic()) {
      c += delta;
      break;
    }
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      const double actual = obj.decrease(c, g, alpha * delta);
      if (actual >= 1e-4 * alpha * -gf.dot(df)) {
        c += alpha * delta;
        moved = true;
        break;
      }
      // rounding floor: keep the step if the gradient still shrinks
      const Vector cn = c + alpha * delta;
      const Vector gn = obj.gradient(cn);
      double gn_free = 0.0;
      for (int a = 0; a < m; ++a) gn_free = std::max(gn_free, std::abs(gn(free_idx[a])));
      if (gn_free < gnorm) {
        c = cn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return c;
}

}  // namespace quantlab

#endif  // QUANTLAB_PROJECTION_HPP_
