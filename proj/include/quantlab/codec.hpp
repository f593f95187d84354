#ifndef QUANTLAB_CODEC_HPP_
#define QUANTLAB_CODEC_HPP_

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/norms.hpp"
#include "quantlab/projection.hpp"

namespace quantlab {

/// One coded coordinate: 1-based index and the cell-edge value of the cell
/// minimizer on that coordinate.
struct CodeEntry {
  int index = 0;
  double value = 0.0;

  friend bool operator==(const CodeEntry&, const CodeEntry&) = default;
};

/**
 * The information transmitted for a datum: the active coordinates of the
 * minimizer of f over its cell and their values. The face sides are not
 * stored; the decoder recovers them from first-order conditions.
 */
struct Code {
  double tau = 1.0;
  int n = 0;
  std::vector<CodeEntry> entries;

  int size() const { return static_cast<int>(entries.size()); }
  friend bool operator==(const Code&, const Code&) = default;
};

/// Throws InconsistentCode when the invariants of `code` do not hold.
inline void validate(const Code& code) {
  require(std::isfinite(code.tau) && code.tau > 0.0, ErrorCode::inconsistent_code,
          "code tau must be positive");
  require(code.n > 0, ErrorCode::inconsistent_code, "code dimension must be positive");
  int previous = 0;
  for (const auto& e : code.entries) {
    require(e.index > previous && e.index <= code.n, ErrorCode::inconsistent_code,
            "code indices must be strictly increasing within 1.." + std::to_string(code.n));
    previous = e.index;
    require(std::isfinite(e.value), ErrorCode::inconsistent_code, "code value is not finite");
    const double t = e.value / code.tau + 0.5;
    require(std::abs(t - std::round(t)) <= 1e-9 * std::max(1.0, std::abs(t)),
            ErrorCode::inconsistent_code,
            "value " + std::to_string(e.value) + " at index " + std::to_string(e.index) +
                " is not a cell edge");
  }
}

inline Code encode(const Vector& u, double tau, const NormModel& f, const Basis& basis,
                   const SolverOptions& opt = {}) {
  const QuantIndex k = quantize(u, tau, basis);
  const SolveResult r = solve_cell(k, tau, f, basis, opt);
  require(!r.degenerate, ErrorCode::degenerate_solve,
          "cell minimizer sits on a face with a vanishing gradient");
  Code code;
  code.tau = tau;
  code.n = basis.dim();
  for (int i : r.pattern.support()) {
    // lower face of cell k is edge k, upper face is edge k + 1
    const std::int64_t edge = k[i] + (r.pattern[i] > 0 ? 1 : 0);
    code.entries.push_back({i + 1, tau * (static_cast<double>(edge) - 0.5)});
  }
  return code;
}

struct DecodeResult {
  QuantIndex k;
  Vector reconstruction;  ///< center of C(k)
};

/**
 * Recovers the cell index from a code.
 *
 * Coded coordinates are pinned to their edge values and the remaining
 * coordinates of the cell minimizer are rebuilt by unconstrained
 * minimization of f (unique by strict convexity); those are quantized
 * directly. A coded coordinate lies on the lower face of its cell when the
 * objective gradient there is positive and on the upper face when it is
 * negative.
 */
inline DecodeResult decode(const Code& code, const NormModel& f, const Basis& basis,
                           const SolverOptions& opt = {}) {
  validate(code);
  require(code.n == basis.dim(), ErrorCode::invalid_argument, "code and basis dimensions differ");
  require_objective(f);
  const int n = code.n;
  const double tau = code.tau;

  Vector c = Vector::Zero(n);
  std::vector<bool> fixed(static_cast<std::size_t>(n), false);
  std::vector<std::int64_t> edge(static_cast<std::size_t>(n), 0);
  for (const auto& e : code.entries) {
    const int j = e.index - 1;
    c(j) = e.value;
    fixed[static_cast<std::size_t>(j)] = true;
    edge[static_cast<std::size_t>(j)] = std::llround(e.value / tau + 0.5);
  }
  c = minimize_free_coords(f, basis, c, fixed);

  const detail::CoordinateObjective obj(f, basis, Vector::Zero(n));
  const Vector g = obj.gradient(c);
  const double gscale = detail::curvature_scale(obj.hessian(c)) * tau;

  DecodeResult out;
  out.k = QuantIndex::zero(n);
  for (int i = 0; i < n; ++i) {
    if (fixed[static_cast<std::size_t>(i)]) {
      const double gi = g(i) / gscale;
      require(std::abs(gi) > opt.eps_active_rel, ErrorCode::ambiguous_face,
              "objective gradient vanishes on coded coordinate " + std::to_string(i + 1));
      out.k[i] = gi > 0.0 ? edge[static_cast<std::size_t>(i)] : edge[static_cast<std::size_t>(i)] - 1;
    } else {
      const double t = c(i) / tau + 0.5;
      require(std::abs(t - std::round(t)) > 0.5 * opt.eps_active_rel, ErrorCode::inconsistent_code,
              "free coordinate " + std::to_string(i + 1) + " lands on a cell edge");
      out.k[i] = static_cast<std::int64_t>(std::floor(t));
    }
  }
  out.reconstruction = cell_center(out.k, tau, basis);
  return out;
}

/// ||u - tau sum_i k_i psi_i|| for a given cell.
inline double cell_error(const Vector& u, const QuantIndex& k, double tau, const Basis& basis,
                         const NormModel& norm) {
  return norm_of(norm, basis, u - cell_center(k, tau, basis));
}

/// Distance between u and the reconstruction decoded from its code.
inline double reconstruction_error(const Vector& u, const Code& code, const NormModel& f,
                                   const Basis& basis, const NormModel& norm,
                                   const SolverOptions& opt = {}) {
  return norm_of(norm, basis, u - decode(code, f, basis, opt).reconstruction);
}

}  // namespace quantlab

#endif  // QUANTLAB_CODEC_HPP_
