#ifndef QUANTLAB_NORMS_HPP_
#define QUANTLAB_NORMS_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/errors.hpp"

namespace quantlab {

enum class NormKind {
  separable_quadratic,  ///< sum_i w_i x_i^2
  euclidean,            ///< ||x||_2
  ellipsoidal,          ///< sqrt(x^T Q x)
  p_power,              ///< sum_i w_i |x_i|^p, p > 1
  p_norm,               ///< (sum_i w_i |x_i|^p)^(1/p), p >= 1
  sup,                  ///< max_i w_i |x_i|
  generic,              ///< user supplied value and gradient
};

/// Space in which a model reads its argument: basis coordinates or the
/// ambient vector itself.
enum class Frame { coords, ambient };

inline std::string to_string(NormKind kind) {
  switch (kind) {
    case NormKind::separable_quadratic: return "sep-quad";
    case NormKind::euclidean: return "euclidean";
    case NormKind::ellipsoidal: return "ellipsoidal";
    case NormKind::p_power: return "p-power";
    case NormKind::p_norm: return "p-norm";
    case NormKind::sup: return "sup";
    case NormKind::generic: return "generic";
  }
  return "unknown";
}

inline std::string to_string(Frame frame) { return frame == Frame::coords ? "coords" : "ambient"; }

/**
 * A positively homogeneous convex function on R^N, used either as the
 * objective minimized over a quantization cell or as a data/reconstruction
 * norm.
 *
 * Besides value and gradient, every model exposes a degree-2 "surrogate"
 * S = (scale * f)^(2/degree). S has the same minimizers over any convex set
 * as f, and is an exact quadratic for the separable-quadratic, euclidean and
 * ellipsoidal kinds, which is what the box solver's Newton step relies on.
 */
class NormModel {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  static NormModel separable_quadratic(Vector weights, Frame frame = Frame::coords) {
    NormModel m(NormKind::separable_quadratic, static_cast<int>(weights.size()), frame, 2.0);
    require(weights.size() > 0 && weights.allFinite() && (weights.array() > 0.0).all(),
            ErrorCode::invalid_argument, "sep-quad weights must be finite and positive");
    m.weights_ = std::move(weights);
    return m;
  }

  static NormModel euclidean(int n, Frame frame = Frame::ambient) {
    require(n > 0, ErrorCode::invalid_argument, "dimension must be positive");
    return NormModel(NormKind::euclidean, n, frame, 1.0);
  }

  static NormModel ellipsoidal(Matrix q, Frame frame = Frame::ambient) {
    require(q.rows() > 0 && q.rows() == q.cols() && q.allFinite(), ErrorCode::invalid_argument,
            "ellipsoidal Q must be a finite square matrix");
    require((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * q.cwiseAbs().maxCoeff(),
            ErrorCode::invalid_argument, "ellipsoidal Q must be symmetric");
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(q);
    require(eig.eigenvalues().minCoeff() > 0.0, ErrorCode::invalid_argument,
            "ellipsoidal Q must be positive definite");
    NormModel m(NormKind::ellipsoidal, static_cast<int>(q.rows()), frame, 1.0);
    m.q_ = std::move(q);
    return m;
  }

  static NormModel p_power(int n, double p, Vector weights = {}, Frame frame = Frame::coords) {
    require(std::isfinite(p) && p > 1.0, ErrorCode::invalid_argument, "p-power requires p > 1");
    NormModel m(NormKind::p_power, n, frame, p);
    m.p_ = p;
    m.weights_ = checked_weights(n, std::move(weights));
    return m;
  }

  static NormModel p_norm(int n, double p, Vector weights = {}, Frame frame = Frame::ambient) {
    require(std::isfinite(p) && p >= 1.0, ErrorCode::invalid_argument, "p-norm requires p >= 1");
    NormModel m(NormKind::p_norm, n, frame, 1.0);
    m.p_ = p;
    m.weights_ = checked_weights(n, std::move(weights));
    return m;
  }

  static NormModel l1(int n, Frame frame = Frame::ambient) { return p_norm(n, 1.0, {}, frame); }

  static NormModel sup(int n, Vector weights = {}, Frame frame = Frame::ambient) {
    NormModel m(NormKind::sup, n, frame, 1.0);
    m.weights_ = checked_weights(n, std::move(weights));
    return m;
  }

  /// `degree` is the homogeneity degree of `value`; the gradient must be
  /// exact. Second derivatives are taken by finite differences.
  static NormModel generic(int n, ValueFn value, GradientFn gradient, double degree,
                           Frame frame = Frame::ambient) {
    require(n > 0, ErrorCode::invalid_argument, "dimension must be positive");
    require(value && gradient, ErrorCode::invalid_argument, "generic norm needs both callbacks");
    require(std::isfinite(degree) && degree > 0.0, ErrorCode::invalid_argument,
            "generic norm degree must be positive");
    NormModel m(NormKind::generic, n, frame, degree);
    m.value_fn_ = std::make_shared<ValueFn>(std::move(value));
    m.gradient_fn_ = std::make_shared<GradientFn>(std::move(gradient));
    return m;
  }

  /// The same model multiplied by c > 0.
  NormModel scaled(double c) const {
    require(std::isfinite(c) && c > 0.0, ErrorCode::invalid_argument, "scale must be positive");
    NormModel m = *this;
    m.scale_ *= c;
    return m;
  }

  NormKind kind() const { return kind_; }
  Frame frame() const { return frame_; }
  int dim() const { return n_; }
  double degree() const { return degree_; }
  double scale() const { return scale_; }
  double exponent() const { return p_; }
  const Vector& weights() const { return weights_; }
  const Matrix& q() const { return q_; }

  bool differentiable() const {
    return kind_ != NormKind::sup && !(kind_ == NormKind::p_norm && p_ == 1.0);
  }
  /// Surrogate is an exact quadratic form.
  bool quadratic_surrogate() const {
    return kind_ == NormKind::separable_quadratic || kind_ == NormKind::euclidean ||
           kind_ == NormKind::ellipsoidal;
  }

  double value(const Vector& x) const {
    check_dim(x);
    return scale_ * raw_value(x);
  }

  Vector gradient(const Vector& x) const {
    check_dim(x);
    require(differentiable(), ErrorCode::invalid_argument,
            to_string(kind_) + " norm has no gradient");
    require(x.squaredNorm() > 0.0, ErrorCode::degenerate_at_origin,
            "gradient requested at the origin");
    return scale_ * raw_gradient(x);
  }

  Matrix hessian(const Vector& x) const {
    check_dim(x);
    require(differentiable(), ErrorCode::invalid_argument,
            to_string(kind_) + " norm has no Hessian");
    return scale_ * raw_hessian(x);
  }

  double surrogate_value(const Vector& x) const {
    check_dim(x);
    switch (kind_) {
      case NormKind::separable_quadratic:
        return scale_ * weights_.dot(x.cwiseAbs2());
      case NormKind::euclidean:
        return scale_ * scale_ * x.squaredNorm();
      case NormKind::ellipsoidal:
        return scale_ * scale_ * x.dot(q_ * x);
      default:
        return std::pow(scale_ * raw_value(x), 2.0 / degree_);
    }
  }

  Vector surrogate_gradient(const Vector& x) const {
    check_dim(x);
    switch (kind_) {
      case NormKind::separable_quadratic:
        return 2.0 * scale_ * weights_.cwiseProduct(x);
      case NormKind::euclidean:
        return 2.0 * scale_ * scale_ * x;
      case NormKind::ellipsoidal:
        return 2.0 * scale_ * scale_ * (q_ * x);
      default: {
        const double f = raw_value(x);
        if (!(f > 0.0)) return Vector::Zero(n_);
        // d/dx (s f)^a = a s^a f^(a-1) grad f, with a = 2/degree
        const double a = 2.0 / degree_;
        return a * std::pow(scale_, a) * std::pow(f, a - 1.0) * raw_gradient(x);
      }
    }
  }

  Matrix surrogate_hessian(const Vector& x) const {
    check_dim(x);
    switch (kind_) {
      case NormKind::separable_quadratic:
        return 2.0 * scale_ * Matrix(weights_.asDiagonal());
      case NormKind::euclidean:
        return 2.0 * scale_ * scale_ * Matrix::Identity(n_, n_);
      case NormKind::ellipsoidal:
        return 2.0 * scale_ * scale_ * q_;
      default: {
        const double f = raw_value(x);
        if (!(f > 0.0)) return Matrix::Identity(n_, n_);
        const double a = 2.0 / degree_;
        const Vector g = raw_gradient(x);
        const double sa = std::pow(scale_, a);
        return sa * (a * std::pow(f, a - 1.0) * raw_hessian(x) +
                     a * (a - 1.0) * std::pow(f, a - 2.0) * (g * g.transpose()));
      }
    }
  }

  /// Half-widths of the axis-aligned box containing {x : value(x) <= radius},
  /// in this model's own argument space.
  Vector ball_halfwidths(double radius) const {
    require(radius >= 0.0, ErrorCode::invalid_argument, "radius must be non-negative");
    const double r = radius / scale_;
    Vector hw(n_);
    switch (kind_) {
      case NormKind::sup:
        return r * weights_.cwiseInverse();
      case NormKind::euclidean:
        return Vector::Constant(n_, r);
      case NormKind::ellipsoidal: {
        const Matrix qinv = q_.inverse();
        for (int i = 0; i < n_; ++i) hw(i) = r * std::sqrt(qinv(i, i));
        return hw;
      }
      case NormKind::p_norm:
        for (int i = 0; i < n_; ++i) hw(i) = r * std::pow(weights_(i), -1.0 / p_);
        return hw;
      case NormKind::separable_quadratic:
        return (r * weights_.cwiseInverse()).cwiseSqrt();
      case NormKind::p_power:
        for (int i = 0; i < n_; ++i) hw(i) = std::pow(r / weights_(i), 1.0 / p_);
        return hw;
      case NormKind::generic:
        break;
    }
    fail(ErrorCode::invalid_argument, "no closed-form bounding box for generic norms");
  }

  /// Lebesgue measure of {x : value(x) <= radius} in this model's argument
  /// space; closed forms for the data-norm catalog.
  double ball_volume(double radius) const {
    const double r = radius / scale_;
    const double n = n_;
    switch (kind_) {
      case NormKind::sup:
        return std::pow(2.0 * r, n) / weights_.prod();
      case NormKind::euclidean:
        return unit_ball_volume(n) * std::pow(r, n);
      case NormKind::ellipsoidal:
        return unit_ball_volume(n) * std::pow(r, n) / std::sqrt(q_.determinant());
      case NormKind::p_norm: {
        const double unit = std::pow(2.0 * std::tgamma(1.0 + 1.0 / p_), n) /
                            std::tgamma(1.0 + n / p_);
        double wprod = 1.0;
        for (int i = 0; i < n_; ++i) wprod *= std::pow(weights_(i), 1.0 / p_);
        return unit * std::pow(r, n) / wprod;
      }
      default:
        break;
    }
    fail(ErrorCode::invalid_argument, "no closed-form ball volume for " + to_string(kind_));
  }

  std::string describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "[frame=" << to_string(frame_);
    if (kind_ == NormKind::p_power || kind_ == NormKind::p_norm) os << ", p=" << p_;
    if (scale_ != 1.0) os << ", scale=" << scale_;
    os << "]";
    return os.str();
  }

 private:
  NormModel(NormKind kind, int n, Frame frame, double degree)
      : kind_(kind), frame_(frame), n_(n), degree_(degree) {
    require(n > 0, ErrorCode::invalid_argument, "dimension must be positive");
  }

  static Vector checked_weights(int n, Vector weights) {
    if (weights.size() == 0) return Vector::Ones(n);
    require(weights.size() == n, ErrorCode::invalid_argument, "weights length mismatch");
    require(weights.allFinite() && (weights.array() > 0.0).all(), ErrorCode::invalid_argument,
            "weights must be finite and positive");
    return weights;
  }

  static double unit_ball_volume(double n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
  }

  void check_dim(const Vector& x) const {
    require(x.size() == n_, ErrorCode::invalid_argument,
            "vector of length " + std::to_string(x.size()) + " given to a " +
                std::to_string(n_) + "-dimensional norm");
  }

  double raw_value(const Vector& x) const {
    switch (kind_) {
      case NormKind::separable_quadratic:
        return weights_.dot(x.cwiseAbs2());
      case NormKind::euclidean:
        return x.norm();
      case NormKind::ellipsoidal:
        return std::sqrt(std::max(0.0, x.dot(q_ * x)));
      case NormKind::p_power: {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += weights_(i) * std::pow(std::abs(x(i)), p_);
        return s;
      }
      case NormKind::p_norm: {
        if (p_ == 1.0) return weights_.dot(x.cwiseAbs());
        const double m = x.cwiseAbs().maxCoeff();
        if (m == 0.0) return 0.0;
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += weights_(i) * std::pow(std::abs(x(i)) / m, p_);
        return m * std::pow(s, 1.0 / p_);
      }
      case NormKind::sup:
        return weights_.cwiseProduct(x.cwiseAbs()).maxCoeff();
      case NormKind::generic:
        return (*value_fn_)(x);
    }
    return 0.0;
  }

  Vector raw_gradient(const Vector& x) const {
    Vector g(n_);
    switch (kind_) {
      case NormKind::separable_quadratic:
        return 2.0 * weights_.cwiseProduct(x);
      case NormKind::euclidean:
        return x / x.norm();
      case NormKind::ellipsoidal:
        return (q_ * x) / raw_value(x);
      case NormKind::p_power:
        for (int i = 0; i < n_; ++i)
          g(i) = p_ * weights_(i) * std::pow(std::abs(x(i)), p_ - 1.0) * sign(x(i));
        return g;
      case NormKind::p_norm: {
        const double f = raw_value(x);
        for (int i = 0; i < n_; ++i)
          g(i) = weights_(i) * std::pow(std::abs(x(i)) / f, p_ - 1.0) * sign(x(i));
        return g;
      }
      case NormKind::generic:
        return (*gradient_fn_)(x);
      case NormKind::sup:
        break;
    }
    fail(ErrorCode::invalid_argument, "sup norm has no gradient");
  }

  Matrix raw_hessian(const Vector& x) const {
    switch (kind_) {
      case NormKind::separable_quadratic:
        return 2.0 * Matrix(weights_.asDiagonal());
      case NormKind::euclidean: {
        const double r = x.norm();
        if (r == 0.0) return Matrix::Identity(n_, n_);
        return (Matrix::Identity(n_, n_) - x * x.transpose() / (r * r)) / r;
      }
      case NormKind::ellipsoidal: {
        const double f = raw_value(x);
        if (f == 0.0) return q_;
        const Vector qx = q_ * x;
        return (q_ - qx * qx.transpose() / (f * f)) / f;
      }
      case NormKind::p_power: {
        // |x|^(p-2) blows up on the axes for p < 2; a floor relative to the
        // largest entry keeps the Newton model finite.
        const double floor = std::max(1e-12 * x.cwiseAbs().maxCoeff(), 1e-300);
        Vector d(n_);
        for (int i = 0; i < n_; ++i)
          d(i) = p_ * (p_ - 1.0) * weights_(i) *
                 std::pow(std::max(std::abs(x(i)), floor), p_ - 2.0);
        return d.asDiagonal();
      }
      default:
        return finite_difference_hessian(x);
    }
  }

  Matrix finite_difference_hessian(const Vector& x) const {
    const double h = 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff());
    Matrix hess(n_, n_);
    for (int j = 0; j < n_; ++j) {
      Vector xp = x, xm = x;
      xp(j) += h;
      xm(j) -= h;
      hess.col(j) = (raw_gradient(xp) - raw_gradient(xm)) / (2.0 * h);
    }
    return 0.5 * (hess + hess.transpose());
  }

  static double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

  NormKind kind_;
  Frame frame_;
  int n_;
  double degree_;
  double scale_ = 1.0;
  double p_ = 2.0;
  Vector weights_;
  Matrix q_;
  std::shared_ptr<const ValueFn> value_fn_;
  std::shared_ptr<const GradientFn> gradient_fn_;
};

// --- free-function surface --------------------------------------------------

inline double eval(const NormModel& f, const Vector& u) { return f.value(u); }
inline Vector grad(const NormModel& f, const Vector& u) { return f.gradient(u); }

/// Map from basis coordinates to the model's argument space.
inline Matrix frame_matrix(const NormModel& f, const Basis& basis) {
  return f.frame() == Frame::coords ? Matrix::Identity(basis.dim(), basis.dim()) : basis.matrix();
}

/// Value of the model on an ambient vector, honouring its frame.
inline double norm_of(const NormModel& f, const Basis& basis, const Vector& v) {
  return f.value(f.frame() == Frame::coords ? basis.to_coords(v) : v);
}

/// Half-widths of an ambient axis-aligned box containing the f-ball.
inline Vector ambient_ball_halfwidths(const NormModel& f, const Basis& basis, double radius) {
  const Vector hw = f.ball_halfwidths(radius);
  if (f.frame() == Frame::ambient) return hw;
  return basis.matrix().cwiseAbs() * hw;
}

/// Ambient volume of the f-ball of the given radius.
inline double ambient_ball_volume(const NormModel& f, const Basis& basis, double radius) {
  const double v = f.ball_volume(radius);
  return f.frame() == Frame::coords ? v * basis.cell_volume() : v;
}

/// Unit normal h(u) = grad f(u) / ||grad f(u)||_2 on the level set f(u) = 1.
inline Vector gauss_map(const NormModel& f, const Vector& u) {
  const double v = f.value(u);
  require(std::abs(v - 1.0) <= 1e-9, ErrorCode::invalid_argument,
          "gauss_map expects a point on the unit level set, got f(u) = " + std::to_string(v));
  const Vector g = f.gradient(u);
  const double n = g.norm();
  require(n > 0.0 && std::isfinite(n), ErrorCode::degenerate_gradient,
          "zero gradient on the level set");
  return g / n;
}

/// Role gates. Objectives must be differentiable with strictly convex level
/// sets; data norms must be norms with a closed-form ball.
inline void require_objective(const NormModel& f) {
  switch (f.kind()) {
    case NormKind::sup:
      fail(ErrorCode::hypothesis_violation, "sup norm has flat level sets and no gradient");
    case NormKind::p_norm:
      require(f.exponent() > 1.0, ErrorCode::hypothesis_violation,
              "l1 norm has flat level sets and no gradient");
      return;
    default:
      return;
  }
}

inline void require_data_norm(const NormModel& f) {
  const bool ok = f.kind() == NormKind::sup || f.kind() == NormKind::euclidean ||
                  f.kind() == NormKind::ellipsoidal || f.kind() == NormKind::p_norm;
  require(ok, ErrorCode::invalid_argument,
          to_string(f.kind()) + " is not a data norm (use sup, euclidean, ellipsoidal or p-norm)");
}

struct CurvatureDiagnostic {
  double lipschitz_estimate_hinv = 0.0;
  double strict_convexity_margin = 0.0;
  int samples = 0;
  bool passed = false;
};

/**
 * Sampled check of the curvature hypotheses on the unit level set of `f`:
 * the strict-convexity margin min(1 - f(midpoint)) over sampled pairs, and
 * the largest ratio ||u1 - u2|| / ||h(u1) - h(u2)|| as an estimate of the
 * Lipschitz constant of the inverse Gauss map.
 *
 * Throws HypothesisViolation with the witness pair when the margin is not
 * positive. Pairs closer than 1e-3 are ignored for the margin, where it is
 * below rounding.
 */
inline CurvatureDiagnostic check_hypotheses(const NormModel& f, int samples, std::uint64_t seed) {
  require(samples >= 100, ErrorCode::invalid_argument, "check_hypotheses needs >= 100 samples");
  const int n = f.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(samples));
  while (static_cast<int>(points.size()) < samples) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = normal(rng);
    const double v = f.value(x);
    if (!(v > 0.0) || !std::isfinite(v)) continue;
    x /= std::pow(v, 1.0 / f.degree());
    points.push_back(std::move(x));
  }

  CurvatureDiagnostic diag;
  diag.samples = samples;
  diag.strict_convexity_margin = std::numeric_limits<double>::infinity();
  const double rounding_floor = 1e-12;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if ((points[i] - points[j]).norm() < 1e-3) continue;
      const double margin = 1.0 - f.value(0.5 * (points[i] + points[j]));
      if (margin < diag.strict_convexity_margin) {
        diag.strict_convexity_margin = margin;
        wi = i;
        wj = j;
      }
    }
  }
  if (!(diag.strict_convexity_margin > rounding_floor)) {
    std::ostringstream os;
    os << f.describe() << " level set is not strictly convex: margin "
       << diag.strict_convexity_margin << " at pair u1=(" << points[wi].transpose()
       << "), u2=(" << points[wj].transpose() << ")";
    fail(ErrorCode::hypothesis_violation, os.str());
  }

  if (f.differentiable()) {
    std::vector<Vector> normals;
    normals.reserve(points.size());
    for (const auto& p : points) {
      const Vector g = f.gradient(p);
      require(g.norm() > 0.0, ErrorCode::degenerate_gradient, "zero gradient on the level set");
      normals.push_back(g / g.norm());
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        const double du = (points[i] - points[j]).norm();
        const double dh = (normals[i] - normals[j]).norm();
        if (du == 0.0) continue;
        worst = std::max(worst, dh > 0.0 ? du / dh : std::numeric_limits<double>::infinity());
      }
    }
    diag.lipschitz_estimate_hinv = worst;
  } else {
    diag.lipschitz_estimate_hinv = std::numeric_limits<double>::infinity();
  }
  diag.passed = true;
  return diag;
}

}  // namespace quantlab

#endif  // QUANTLAB_NORMS_HPP_
