#ifndef QUANTLAB_BASIS_HPP_
#define QUANTLAB_BASIS_HPP_

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "quantlab/errors.hpp"

namespace quantlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Change of coordinates between the ambient space and the coefficients in a
 * basis (psi_1..psi_N). Columns of `matrix()` are the basis vectors, so an
 * ambient vector is `matrix() * coords`.
 *
 * Construction rejects singular or badly conditioned matrices (condition
 * number above `kMaxCondition`); the inverse is cached and checked against
 * the identity.
 */
class Basis {
 public:
  static constexpr double kMaxCondition = 1e8;

  explicit Basis(Matrix matrix) : matrix_(std::move(matrix)) {
    require(matrix_.rows() > 0 && matrix_.rows() == matrix_.cols(), ErrorCode::invalid_argument,
            "basis matrix must be square and non-empty");
    require(matrix_.allFinite(), ErrorCode::non_finite_input, "basis matrix has non-finite entries");
    const Eigen::JacobiSVD<Matrix> svd(matrix_);
    const Vector& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    condition_ = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    require(std::isfinite(condition_) && condition_ <= kMaxCondition,
            ErrorCode::ill_conditioned_basis,
            "basis condition number " + std::to_string(condition_) + " exceeds 1e8");
    const Eigen::PartialPivLU<Matrix> lu(matrix_);
    inverse_ = lu.inverse();
    const double residual =
        (matrix_ * inverse_ - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    require(residual <= 1e-10, ErrorCode::ill_conditioned_basis,
            "basis inverse residual " + std::to_string(residual) + " above 1e-10");
    cell_volume_ = std::abs(lu.determinant());
    orthogonal_ = check_orthogonal();
  }

  static Basis identity(int n) { return Basis(Matrix::Identity(n, n)); }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  const Matrix& inverse() const { return inverse_; }
  /// |det| of the matrix: volume of the unit coordinate cell.
  double cell_volume() const { return cell_volume_; }
  double condition() const { return condition_; }
  /// Columns pairwise orthogonal (not necessarily unit length).
  bool orthogonal() const { return orthogonal_; }

  Vector to_coords(const Vector& u) const {
    check_dim(u);
    return inverse_ * u;
  }
  Vector from_coords(const Vector& c) const {
    check_dim(c);
    return matrix_ * c;
  }

 private:
  void check_dim(const Vector& v) const {
    require(v.size() == matrix_.rows(), ErrorCode::invalid_argument,
            "vector of length " + std::to_string(v.size()) + " does not match basis dimension " +
                std::to_string(matrix_.rows()));
  }

  bool check_orthogonal() const {
    const Matrix gram = matrix_.transpose() * matrix_;
    const double scale = gram.diagonal().maxCoeff();
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j)
        if (i != j && std::abs(gram(i, j)) > 1e-12 * scale) return false;
    return true;
  }

  Matrix matrix_;
  Matrix inverse_;
  double cell_volume_ = 0.0;
  double condition_ = 0.0;
  bool orthogonal_ = false;
};

inline Vector to_coords(const Vector& u, const Basis& basis) { return basis.to_coords(u); }
inline Vector from_coords(const Vector& c, const Basis& basis) { return basis.from_coords(c); }

/// Integer cell index (k_1..k_N) of a quantization cell.
struct QuantIndex {
  std::vector<std::int64_t> k;

  QuantIndex() = default;
  explicit QuantIndex(std::vector<std::int64_t> values) : k(std::move(values)) {}
  static QuantIndex zero(int n) { return QuantIndex(std::vector<std::int64_t>(n, 0)); }

  int size() const { return static_cast<int>(k.size()); }
  std::int64_t operator[](int i) const { return k[static_cast<std::size_t>(i)]; }
  std::int64_t& operator[](int i) { return k[static_cast<std::size_t>(i)]; }
  bool is_zero() const {
    for (auto v : k)
      if (v != 0) return false;
    return true;
  }
  Vector as_vector() const {
    Vector v(size());
    for (int i = 0; i < size(); ++i) v(i) = static_cast<double>(k[i]);
    return v;
  }

  friend bool operator==(const QuantIndex&, const QuantIndex&) = default;
  friend auto operator<=>(const QuantIndex&, const QuantIndex&) = default;
};

struct QuantIndexHash {
  std::size_t operator()(const QuantIndex& q) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : q.k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Box [tau(k_i - 1/2), tau(k_i + 1/2)] in basis coordinates.
struct Cell {
  QuantIndex index;
  double tau = 1.0;

  double lower(int i) const { return tau * (static_cast<double>(index[i]) - 0.5); }
  double upper(int i) const { return tau * (static_cast<double>(index[i]) + 0.5); }
  double center(int i) const { return tau * static_cast<double>(index[i]); }
  /// Half-open membership test on coordinates.
  bool contains_coords(const Vector& c) const {
    for (int i = 0; i < index.size(); ++i)
      if (!(lower(i) <= c(i) && c(i) < upper(i))) return false;
    return true;
  }
};

inline void require_tau(double tau) {
  require(std::isfinite(tau) && tau > 0.0, ErrorCode::invalid_argument, "tau must be positive");
}

/// Cell index of a coordinate vector: k_i = floor(c_i / tau + 1/2), so the
/// lower cell edge is included and the upper edge belongs to the next cell.
inline QuantIndex quantize_coords(const Vector& c, double tau) {
  require_tau(tau);
  QuantIndex q = QuantIndex::zero(static_cast<int>(c.size()));
  for (int i = 0; i < c.size(); ++i) {
    require(std::isfinite(c(i)), ErrorCode::non_finite_input,
            "coordinate " + std::to_string(i + 1) + " is not finite");
    // floor(t + 1/2) without the rounding of the sum just below an edge
    const double t = c(i) / tau;
    const double whole = std::floor(t);
    q[i] = static_cast<std::int64_t>(whole) + (t - whole >= 0.5 ? 1 : 0);
  }
  return q;
}

inline QuantIndex quantize(const Vector& u, double tau, const Basis& basis) {
  require(u.allFinite(), ErrorCode::non_finite_input, "input vector is not finite");
  return quantize_coords(basis.to_coords(u), tau);
}

/// tau * sum_i k_i psi_i.
inline Vector cell_center(const QuantIndex& k, double tau, const Basis& basis) {
  require_tau(tau);
  require(k.size() == basis.dim(), ErrorCode::invalid_argument, "cell index dimension mismatch");
  return basis.from_coords(tau * k.as_vector());
}

}  // namespace quantlab

#endif  // QUANTLAB_BASIS_HPP_
