#ifndef QUANTLAB_GEOMETRY_HPP_
#define QUANTLAB_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/norms.hpp"
#include "quantlab/parallel.hpp"
#include "quantlab/projection.hpp"

namespace quantlab {

/// Equivalence class of boundary points of C(0) sharing a signed active
/// pattern. Its center keeps the active coordinates at +-tau/2 and zeroes
/// the others.
struct ClassId {
  FacePattern pattern;
  double tau = 1.0;

  int K() const { return pattern.K(); }
  Vector center_coords() const {
    Vector c = Vector::Zero(pattern.size());
    for (int i : pattern.support()) c(i) = 0.5 * tau * pattern[i];
    return c;
  }
  Vector center(const Basis& basis) const { return basis.from_coords(center_coords()); }
};

struct Classification {
  ClassId cls;
  double distance = 0.0;  ///< f_d(u - u*)
  SolveResult solve;
};

/// Class of the minimizer of the centered problem for u, and the data-norm
/// distance from u to it.
inline Classification classify(const Vector& u, double tau, const NormModel& f,
                               const NormModel& fd, const Basis& basis,
                               const SolverOptions& opt = {}) {
  Classification out;
  out.solve = solve_centered(u, tau, f, basis, opt);
  require(!out.solve.degenerate, ErrorCode::degenerate_solve,
          "minimizer sits on a face with a vanishing gradient");
  out.cls = ClassId{out.solve.pattern, tau};
  out.distance = norm_of(fd, basis, u - out.solve.minimizer);
  return out;
}

/**
 * sup of f_d over the unit coordinate cell {sum u_i psi_i : |u_i| <= 1/2};
 * f_d(v) <= M tau then holds on all of C(0). Convexity puts the maximum on
 * one of the 2^N vertices.
 */
inline double cell_sup_constant(const NormModel& fd, const Basis& basis) {
  const int n = basis.dim();
  require(n <= 20, ErrorCode::dimension_too_large,
          "vertex enumeration limited to N <= 20, got N = " + std::to_string(n));
  double best = 0.0;
  Vector c(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (int i = 0; i < n; ++i) c(i) = (mask >> i) & 1 ? 0.5 : -0.5;
    best = std::max(best, norm_of(fd, basis, basis.from_coords(c)));
  }
  return best;
}

struct GridCount {
  int K = 0;
  double tau = 0.0;
  double tau_prime = 0.0;
  std::int64_t count = 0;     ///< grid points with f_d <= tau'
  double scaled = 0.0;        ///< tau^K * count
  std::int64_t count_lo = 0;  ///< radius tau' - M tau
  std::int64_t count_hi = 0;  ///< radius tau' + M tau
  std::int64_t degenerate_count = 0;
};

/// Counts of every stratum K = 0..N on one grid, plus totals.
struct GridCensus {
  double tau = 0.0;
  double tau_prime = 0.0;
  double M = 0.0;
  std::vector<GridCount> by_k;
  std::int64_t total_in_ball = 0;  ///< all grid points with f_d <= tau'
  std::int64_t enumerated = 0;     ///< size of the bounding box scanned
  std::int64_t degenerate = 0;     ///< degenerate points with f_d <= tau'
};

struct EnumerationOptions {
  int threads = 1;
  std::int64_t budget = 100'000'000;
};

namespace detail {

/// Integer box |k_i| <= bound_i containing every grid point with f_d <= radius.
inline std::vector<std::int64_t> lattice_bounds(const NormModel& fd, const Basis& basis,
                                                double tau, double radius) {
  const int n = basis.dim();
  Vector coord_hw;
  if (fd.frame() == Frame::coords) {
    coord_hw = fd.ball_halfwidths(radius);
  } else {
    coord_hw = basis.inverse().cwiseAbs() * fd.ball_halfwidths(radius);
  }
  std::vector<std::int64_t> bounds(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    bounds[static_cast<std::size_t>(i)] =
        static_cast<std::int64_t>(std::floor(coord_hw(i) / tau * (1.0 + 1e-12)));
  return bounds;
}

inline std::int64_t lattice_size(const std::vector<std::int64_t>& bounds, std::int64_t budget,
                                 double tau) {
  double total = 1.0;
  for (auto b : bounds) total *= static_cast<double>(2 * b + 1);
  if (total > static_cast<double>(budget)) {
    const double floor_tau = tau * std::pow(total / static_cast<double>(budget),
                                            1.0 / static_cast<double>(bounds.size()));
    fail(ErrorCode::enumeration_budget_exceeded,
         "grid enumeration needs " + std::to_string(total) + " points (budget " +
             std::to_string(budget) + "); use tau >= " + std::to_string(floor_tau));
  }
  return static_cast<std::int64_t>(total);
}

inline QuantIndex lattice_point(std::int64_t linear, const std::vector<std::int64_t>& bounds) {
  QuantIndex k = QuantIndex::zero(static_cast<int>(bounds.size()));
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const std::int64_t width = 2 * bounds[i] + 1;
    k.k[i] = linear % width - bounds[i];
    linear /= width;
  }
  return k;
}

inline bool within(double r, double radius) { return r <= radius * (1.0 + 1e-12); }

constexpr std::int64_t kChunk = 4096;

}  // namespace detail

/**
 * Enumerates the grid tau * sum k_i psi_i inside the f_d-ball of radius
 * tau' + M tau and buckets every point by the size K of the active set of
 * the minimizer of f over its cell. Three radii are tallied: tau' (the
 * count), and tau' -+ M tau (the bracket). Degenerate solves are counted
 * apart and never join a bucket. Results do not depend on the worker count.
 */
inline GridCensus grid_census(double tau, double tau_prime, const NormModel& f,
                              const NormModel& fd, const Basis& basis,
                              const SolverOptions& opt = {}, const EnumerationOptions& en = {}) {
  require_tau(tau);
  require(tau_prime > 0.0, ErrorCode::invalid_argument, "tau' must be positive");
  require_data_norm(fd);
  const int n = basis.dim();
  GridCensus census;
  census.tau = tau;
  census.tau_prime = tau_prime;
  census.M = cell_sup_constant(fd, basis);
  const double r_lo = tau_prime - census.M * tau;
  const double r_hi = tau_prime + census.M * tau;

  const auto bounds = detail::lattice_bounds(fd, basis, tau, r_hi);
  const std::int64_t total = detail::lattice_size(bounds, en.budget, tau);
  census.enumerated = total;

  struct Tally {
    std::vector<std::int64_t> count, lo, hi, degen;
    std::int64_t total_in_ball = 0;
  };
  const auto n_chunks = static_cast<std::size_t>((total + detail::kChunk - 1) / detail::kChunk);
  std::vector<Tally> tallies(n_chunks);

  parallel_for(n_chunks, resolve_threads(en.threads), [&](std::size_t chunk) {
    Tally t;
    t.count.assign(static_cast<std::size_t>(n + 1), 0);
    t.lo = t.hi = t.degen = t.count;
    const std::int64_t begin = static_cast<std::int64_t>(chunk) * detail::kChunk;
    const std::int64_t end = std::min(total, begin + detail::kChunk);
    for (std::int64_t li = begin; li < end; ++li) {
      const QuantIndex k = detail::lattice_point(li, bounds);
      const double r = norm_of(fd, basis, cell_center(k, tau, basis));
      if (!detail::within(r, r_hi)) continue;
      const bool in_ball = detail::within(r, tau_prime);
      const bool in_lo = r_lo > 0.0 && detail::within(r, r_lo);
      if (in_ball) ++t.total_in_ball;
      const SolveResult s = solve_cell(k, tau, f, basis, opt);
      const auto K = static_cast<std::size_t>(s.pattern.K());
      if (s.degenerate) {
        if (in_ball) ++t.degen[K];
        continue;
      }
      ++t.hi[K];
      if (in_ball) ++t.count[K];
      if (in_lo) ++t.lo[K];
    }
    tallies[chunk] = std::move(t);
  });

  census.by_k.resize(static_cast<std::size_t>(n + 1));
  for (int K = 0; K <= n; ++K) {
    GridCount& g = census.by_k[static_cast<std::size_t>(K)];
    g.K = K;
    g.tau = tau;
    g.tau_prime = tau_prime;
  }
  for (const auto& t : tallies) {
    census.total_in_ball += t.total_in_ball;
    for (int K = 0; K <= n; ++K) {
      const auto k = static_cast<std::size_t>(K);
      census.by_k[k].count += t.count[k];
      census.by_k[k].count_lo += t.lo[k];
      census.by_k[k].count_hi += t.hi[k];
      census.by_k[k].degenerate_count += t.degen[k];
      census.degenerate += t.degen[k];
    }
  }
  for (auto& g : census.by_k) g.scaled = std::pow(tau, g.K) * static_cast<double>(g.count);
  return census;
}

inline GridCount count_grid(int K, double tau, double tau_prime, const NormModel& f,
                            const NormModel& fd, const Basis& basis,
                            const SolverOptions& opt = {}, const EnumerationOptions& en = {}) {
  require(K >= 0 && K <= basis.dim(), ErrorCode::invalid_argument, "K must lie in 0..N");
  return grid_census(tau, tau_prime, f, fd, basis, opt, en).by_k[static_cast<std::size_t>(K)];
}

struct StratumRung {
  double tau = 0.0;
  std::int64_t count = 0;
  double scaled = 0.0;
  std::optional<double> delta;  ///< scaled minus the previous rung's scaled
};

struct StratumEstimate {
  int K = 0;
  double estimate = 0.0;  ///< scaled count at the finest rung
  std::vector<StratumRung> table;
};

inline void require_ladder(const std::vector<double>& ladder, std::size_t min_rungs) {
  require(ladder.size() >= min_rungs, ErrorCode::invalid_argument,
          "tau ladder needs at least " + std::to_string(min_rungs) + " rungs");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    require(std::isfinite(ladder[i]) && ladder[i] > 0.0, ErrorCode::invalid_argument,
            "tau ladder entries must be positive");
    if (i > 0)
      require(ladder[i] < ladder[i - 1], ErrorCode::invalid_argument,
              "tau ladder must be strictly decreasing");
  }
}

/**
 * Estimates the summed projected measure of the K-stratum as the limit of
 * tau^K times the grid count, reading it at the finest rung and reporting
 * every rung with successive differences.
 */
inline StratumEstimate estimate_stratum_measure(int K, double tau_prime, const NormModel& f,
                                                const NormModel& fd, const Basis& basis,
                                                const std::vector<double>& ladder,
                                                const SolverOptions& opt = {},
                                                const EnumerationOptions& en = {}) {
  require_ladder(ladder, 3);
  StratumEstimate out;
  out.K = K;
  for (double tau : ladder) {
    const GridCount g = count_grid(K, tau, tau_prime, f, fd, basis, opt, en);
    StratumRung rung{tau, g.count, g.scaled, std::nullopt};
    if (!out.table.empty()) rung.delta = g.scaled - out.table.back().scaled;
    out.table.push_back(rung);
  }
  out.estimate = out.table.back().scaled;
  return out;
}

inline StratumEstimate estimate_A_K(int K, double tau_prime, const NormModel& f, const NormModel& fd,
                                    const Basis& basis, const std::vector<double>& ladder,
                                    const SolverOptions& opt = {}, const EnumerationOptions& en = {}) {
  return estimate_stratum_measure(K, tau_prime, f, fd, basis, ladder, opt, en);
}

struct SliceViolation {
  ClassId cls;
  std::vector<std::int64_t> slice;  ///< fixed active-coordinate indices k_J
  QuantIndex first;
  QuantIndex second;
};

struct SliceReport {
  bool passed = true;
  std::int64_t grid_points = 0;   ///< points whose class distance lies in ]0, tau']
  std::int64_t slices = 0;        ///< non-empty (class, slice) pairs
  std::int64_t classes = 0;
  std::int64_t degenerate = 0;    ///< points skipped for a degenerate solve
  std::optional<SliceViolation> witness;
};

/**
 * Checks that each slice (grid points sharing the indices k_j of the active
 * coordinates j of a class) holds at most one grid point whose centered
 * minimizer lies in that class at data distance in ]0, tau']. With
 * `only` set, only that class is examined. Degenerate solves are counted and
 * left out.
 */
inline SliceReport check_slice_uniqueness(double tau, double tau_prime, const NormModel& f,
                                          const NormModel& fd, const Basis& basis,
                                          const std::optional<ClassId>& only = std::nullopt,
                                          const SolverOptions& opt = {},
                                          const EnumerationOptions& en = {}) {
  require_tau(tau);
  require_data_norm(fd);
  require(basis.dim() <= 6, ErrorCode::dimension_too_large,
          "exhaustive slice enumeration limited to N <= 6");
  const double M = cell_sup_constant(fd, basis);
  // f_d(u) <= f_d(u - u*) + f_d(u*) <= tau' + M tau
  const auto bounds = detail::lattice_bounds(fd, basis, tau, tau_prime + M * tau);
  const std::int64_t total = detail::lattice_size(bounds, en.budget, tau);

  struct Hit {
    bool keep = false;
    bool degenerate = false;
    FacePattern pattern;
  };
  std::vector<Hit> hits(static_cast<std::size_t>(total));
  const auto n_chunks = static_cast<std::size_t>((total + detail::kChunk - 1) / detail::kChunk);
  parallel_for(n_chunks, resolve_threads(en.threads), [&](std::size_t chunk) {
    const std::int64_t begin = static_cast<std::int64_t>(chunk) * detail::kChunk;
    const std::int64_t end = std::min(total, begin + detail::kChunk);
    for (std::int64_t li = begin; li < end; ++li) {
      const QuantIndex k = detail::lattice_point(li, bounds);
      const Vector u = cell_center(k, tau, basis);
      const SolveResult r = solve_centered(u, tau, f, basis, opt);
      const double distance = norm_of(fd, basis, u - r.minimizer);
      if (!(distance > 0.0) || !detail::within(distance, tau_prime)) continue;
      if (r.degenerate) {
        hits[static_cast<std::size_t>(li)].degenerate = true;
        continue;
      }
      if (only && !(r.pattern == only->pattern)) continue;
      hits[static_cast<std::size_t>(li)] = Hit{true, false, r.pattern};
    }
  });

  SliceReport report;
  std::map<std::pair<FacePattern, std::vector<std::int64_t>>, std::int64_t> first_seen;
  std::map<FacePattern, int> classes;
  for (std::int64_t li = 0; li < total; ++li) {
    const Hit& h = hits[static_cast<std::size_t>(li)];
    if (h.degenerate) ++report.degenerate;
    if (!h.keep) continue;
    ++report.grid_points;
    classes[h.pattern] = 1;
    const QuantIndex k = detail::lattice_point(li, bounds);
    std::vector<std::int64_t> slice;
    for (int j : h.pattern.support()) slice.push_back(k[j]);
    auto key = std::make_pair(h.pattern, slice);
    auto [it, inserted] = first_seen.emplace(key, li);
    if (inserted) continue;
    if (report.passed) {
      report.passed = false;
      report.witness = SliceViolation{ClassId{h.pattern, tau}, slice,
                                      detail::lattice_point(it->second, bounds), k};
    }
  }
  report.slices = static_cast<std::int64_t>(first_seen.size());
  report.classes = static_cast<std::int64_t>(classes.size());
  return report;
}

}  // namespace quantlab

#endif  // QUANTLAB_GEOMETRY_HPP_
