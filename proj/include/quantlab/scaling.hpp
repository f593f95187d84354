#ifndef QUANTLAB_SCALING_HPP_
#define QUANTLAB_SCALING_HPP_

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/codec.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/geometry.hpp"
#include "quantlab/norms.hpp"
#include "quantlab/parallel.hpp"
#include "quantlab/projection.hpp"
#include "quantlab/rng.hpp"

namespace quantlab {

// --- sampling ---------------------------------------------------------------

/**
 * Uniform sampler on {u : f_d(u) <= tau'} by rejection from an ambient
 * bounding box. Construction fails with AcceptanceTooLow when the expected
 * acceptance (ball volume over box volume) is below 1e-4.
 */
class BallSampler {
 public:
  static constexpr double kMinAcceptance = 1e-4;

  BallSampler(const NormModel& fd, const Basis& basis, double tau_prime)
      : fd_(fd), basis_(basis), tau_prime_(tau_prime) {
    require_data_norm(fd);
    require(tau_prime > 0.0, ErrorCode::invalid_argument, "tau' must be positive");
    halfwidths_ = ambient_ball_halfwidths(fd, basis, tau_prime);
    const double box = (2.0 * halfwidths_).prod();
    expected_acceptance_ = std::min(1.0, ambient_ball_volume(fd, basis, tau_prime) / box);
    require(expected_acceptance_ >= kMinAcceptance, ErrorCode::acceptance_too_low,
            "rejection acceptance " + std::to_string(expected_acceptance_) +
                " is below 1e-4; use a sup data norm or a smaller dimension");
  }

  template <class Rng>
  Vector sample(Rng& rng, std::int64_t* proposals = nullptr) const {
    const int n = basis_.dim();
    Vector x(n);
    for (;;) {
      for (int i = 0; i < n; ++i) x(i) = halfwidths_(i) * (2.0 * uniform(rng) - 1.0);
      if (proposals) ++*proposals;
      if (norm_of(fd_, basis_, x) <= tau_prime_) return x;
    }
  }

  double expected_acceptance() const { return expected_acceptance_; }
  const Vector& halfwidths() const { return halfwidths_; }

 private:
  template <class Rng>
  static double uniform(Rng& rng) {
    if constexpr (requires { rng.uniform(); }) {
      return rng.uniform();
    } else {
      return std::generate_canonical<double, 53>(rng);
    }
  }

  const NormModel& fd_;
  const Basis& basis_;
  double tau_prime_;
  Vector halfwidths_;
  double expected_acceptance_ = 0.0;
};

template <class Rng>
Vector sample_uniform_ball(const NormModel& fd, double tau_prime, const Basis& basis, Rng& rng) {
  return BallSampler(fd, basis, tau_prime).sample(rng);
}

// --- constants --------------------------------------------------------------

struct ConstantEstimate {
  double value = 0.0;
  double error = 0.0;  ///< standard error (Monte Carlo) or refinement delta (quadrature)
  std::int64_t points = 0;
  std::string method;
};

enum class IntegrationMethod { quadrature, montecarlo };

/**
 * Mean reconstruction-norm constant: the integral of ||v|| over the unit
 * cell {sum v_i psi_i : |v_i| <= 1/2}, taken in ambient measure (the
 * coordinate integral times |det|).
 *
 * Quadrature uses the tensor midpoint rule with an even number of nodes per
 * axis, the largest fitting in `budget`, and reports the difference from the
 * rule with half as many nodes.
 */
inline ConstantEstimate mean_cell_norm(const NormModel& norm, const Basis& basis,
                                       IntegrationMethod method, std::int64_t budget,
                                       std::uint64_t seed = 0) {
  require(budget >= 100'000, ErrorCode::invalid_argument, "integration budget must be >= 1e5");
  const int n = basis.dim();
  ConstantEstimate out;
  if (method == IntegrationMethod::montecarlo) {
    out.method = "montecarlo";
    double sum = 0.0, sumsq = 0.0;
    Vector c(n);
    for (std::int64_t i = 0; i < budget; ++i) {
      CounterRng rng(seed, 0xC0FFEE, static_cast<std::uint64_t>(i));
      for (int d = 0; d < n; ++d) c(d) = rng.uniform() - 0.5;
      const double v = norm_of(norm, basis, basis.from_coords(c));
      sum += v;
      sumsq += v * v;
    }
    const double nb = static_cast<double>(budget);
    const double mean = sum / nb;
    const double var = std::max(0.0, sumsq / nb - mean * mean);
    out.value = basis.cell_volume() * mean;
    out.error = basis.cell_volume() * std::sqrt(var / nb);
    out.points = budget;
    return out;
  }

  out.method = "quadrature";
  auto per_axis = static_cast<std::int64_t>(
      std::floor(std::pow(static_cast<double>(budget), 1.0 / n) * (1.0 + 1e-12)));
  per_axis -= per_axis % 2;
  require(per_axis >= 4, ErrorCode::invalid_argument,
          "quadrature budget too small for dimension " + std::to_string(n));
  auto midpoint = [&](std::int64_t m) {
    std::int64_t total = 1;
    for (int d = 0; d < n; ++d) total *= m;
    double sum = 0.0;
    Vector c(n);
    for (std::int64_t li = 0; li < total; ++li) {
      std::int64_t rest = li;
      for (int d = 0; d < n; ++d) {
        c(d) = (static_cast<double>(rest % m) + 0.5) / static_cast<double>(m) - 0.5;
        rest /= m;
      }
      sum += norm_of(norm, basis, basis.from_coords(c));
    }
    return std::make_pair(basis.cell_volume() * sum / static_cast<double>(total), total);
  };
  const auto [fine, fine_points] = midpoint(per_axis);
  const auto [coarse, coarse_points] = midpoint(per_axis / 2);
  out.value = fine;
  out.error = std::abs(fine - coarse);
  out.points = fine_points + coarse_points;
  return out;
}

/// Ratio of the volume of the data ball {f_d <= tau'} to the unit-cell volume.
inline double ball_cell_ratio(const NormModel& fd, double tau_prime, const Basis& basis) {
  require_data_norm(fd);
  require(tau_prime > 0.0, ErrorCode::invalid_argument, "tau' must be positive");
  return ambient_ball_volume(fd, basis, tau_prime) / basis.cell_volume();
}

/// Monte Carlo estimate of the same ratio (hit fraction of the bounding box).
inline ConstantEstimate ball_cell_ratio_montecarlo(const NormModel& fd, double tau_prime,
                                                   const Basis& basis, std::int64_t budget,
                                                   std::uint64_t seed = 0) {
  require_data_norm(fd);
  const int n = basis.dim();
  const Vector hw = ambient_ball_halfwidths(fd, basis, tau_prime);
  const double box = (2.0 * hw).prod();
  std::int64_t hits = 0;
  Vector x(n);
  for (std::int64_t i = 0; i < budget; ++i) {
    CounterRng rng(seed, 0xB0B, static_cast<std::uint64_t>(i));
    for (int d = 0; d < n; ++d) x(d) = hw(d) * (2.0 * rng.uniform() - 1.0);
    if (norm_of(fd, basis, x) <= tau_prime) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(budget);
  ConstantEstimate out;
  out.method = "montecarlo";
  out.points = budget;
  out.value = box * p / basis.cell_volume();
  out.error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(budget)) / basis.cell_volume();
  return out;
}

struct LawConstants {
  double D = 0.0;       ///< A_K / (B C^((N-K)/(N+1)))
  double D_prime = 0.0; ///< A_K / (B C^(N-K))
};

inline LawConstants law_constants(double A_K, double B, double C, int N, int K) {
  require(A_K > 0.0 && B > 0.0 && C > 0.0, ErrorCode::invalid_argument,
          "law constants need positive A_K, B and C");
  require(K >= 1 && K <= N, ErrorCode::invalid_argument, "K must lie in 1..N");
  LawConstants out;
  out.D = A_K / (B * std::pow(C, static_cast<double>(N - K) / static_cast<double>(N + 1)));
  out.D_prime = A_K / (B * std::pow(C, static_cast<double>(N - K)));
  return out;
}

// Short names used by the command line and the report.
inline ConstantEstimate compute_C(const NormModel& recon, const Basis& basis,
                                  IntegrationMethod method, std::int64_t budget,
                                  std::uint64_t seed = 0) {
  return mean_cell_norm(recon, basis, method, budget, seed);
}
inline double compute_B(const NormModel& fd, double tau_prime, const Basis& basis) {
  return ball_cell_ratio(fd, tau_prime, basis);
}
inline LawConstants compute_D_K(double A_K, double B, double C, int N, int K) {
  return law_constants(A_K, B, C, N, K);
}

// --- experiment -------------------------------------------------------------

struct ExperimentConfig {
  ExperimentConfig(Basis basis_, NormModel objective_, NormModel data_norm_, NormModel recon_norm_)
      : basis(std::move(basis_)),
        objective(std::move(objective_)),
        data_norm(std::move(data_norm_)),
        recon_norm(std::move(recon_norm_)) {}

  Basis basis;
  NormModel objective;
  NormModel data_norm;
  NormModel recon_norm;
  double tau_prime = 1.0;
  std::vector<double> tau_ladder;
  std::int64_t samples_per_tau = 10'000;
  std::uint64_t seed = 0;
  int threads = 1;
  SolverOptions solver;
  IntegrationMethod c_method = IntegrationMethod::quadrature;
  std::int64_t c_budget = 1'000'000;
  bool grid_counts = true;
  std::int64_t enumeration_budget = 100'000'000;
  /// Every audit_stride-th sample is re-encoded from scratch and its code
  /// size compared with the memoized cell.
  std::int64_t audit_stride = 100;
  int hypothesis_samples = 200;
};

struct StratumRow {
  int K = 0;
  std::int64_t count = 0;
  double p_hat = 0.0;
  double se = 0.0;
  double scaled_prob = 0.0;  ///< p_hat * tau^(K-N)
  std::optional<GridCount> grid;
  /// |p_hat tau^(K-N) B - tau^K count| and its allowance 3 SE + bracket width.
  std::optional<double> consistency_gap;
  std::optional<double> consistency_allowance;
};

struct RungReport {
  double tau = 0.0;
  std::int64_t samples = 0;
  std::int64_t degenerate = 0;
  std::int64_t proposals = 0;
  double acceptance = 0.0;
  double E_hat = 0.0;
  double E_se = 0.0;
  std::int64_t audited = 0;
  std::int64_t audit_mismatches = 0;
  std::int64_t memo_cells = 0;
  std::vector<StratumRow> strata;
};

struct LinearFit {
  bool ok = false;
  std::string reason;
  int points = 0;
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double ci_lo = std::numeric_limits<double>::quiet_NaN();
  double ci_hi = std::numeric_limits<double>::quiet_NaN();
};

struct StratumFit {
  int K = 0;
  LinearFit vs_tau;  ///< log p_hat against log tau
  LinearFit vs_E;    ///< log p_hat against log E_hat
  double counting_exponent = 0.0;  ///< N - K
  double law_exponent = 0.0;       ///< (N - K) / (N + 1)
};

struct FitTable {
  LinearFit error_vs_tau;  ///< log E_hat against log tau
  std::vector<StratumFit> strata;
};

struct StratumConstants {
  int K = 0;
  std::optional<double> A;
  std::optional<double> D;
  std::optional<double> D_prime;
};

struct ScalingReport {
  int N = 0;
  double tau_prime = 0.0;
  std::int64_t samples_per_tau = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  double B = 0.0;
  ConstantEstimate C;
  double M = 0.0;
  CurvatureDiagnostic objective_diagnostic;
  std::vector<RungReport> rungs;
  std::vector<StratumConstants> constants;
  FitTable fits;
  std::vector<std::string> warnings;
};

/// Ordinary least squares with a 95% Student-t interval on the slope.
inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                               std::size_t min_points) {
  LinearFit fit;
  fit.points = static_cast<int>(x.size());
  if (x.size() < std::max<std::size_t>(min_points, 2)) {
    fit.reason = "InsufficientData: " + std::to_string(x.size()) + " usable rungs, need " +
                 std::to_string(std::max<std::size_t>(min_points, 2));
    return fit;
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) {
    fit.reason = "InsufficientData: abscissae are all equal";
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - (fit.intercept + fit.slope * x[i]);
      ssr += r * r;
    }
    const double se = std::sqrt(ssr / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_lo = fit.slope - t * se;
    fit.ci_hi = fit.slope + t * se;
  } else {
    fit.ci_lo = -std::numeric_limits<double>::infinity();
    fit.ci_hi = std::numeric_limits<double>::infinity();
  }
  fit.ok = true;
  return fit;
}

/**
 * Log-log slopes of p_hat(K) against tau and against E_hat, using rungs
 * where p_hat(K) > 10 / samples; at least four rungs are required per K.
 * The counting exponent N - K and the exponent (N - K)/(N + 1) are listed
 * next to the fitted values.
 */
inline FitTable fit_exponents(const ScalingReport& report) {
  FitTable table;
  std::vector<double> lt, le;
  for (const auto& r : report.rungs) {
    if (r.E_hat > 0.0) {
      lt.push_back(std::log(r.tau));
      le.push_back(std::log(r.E_hat));
    }
  }
  table.error_vs_tau = least_squares(lt, le, 3);
  for (int K = 0; K <= report.N; ++K) {
    StratumFit sf;
    sf.K = K;
    sf.counting_exponent = report.N - K;
    sf.law_exponent = static_cast<double>(report.N - K) / static_cast<double>(report.N + 1);
    std::vector<double> xt, xe, y;
    for (const auto& r : report.rungs) {
      const StratumRow& row = r.strata[static_cast<std::size_t>(K)];
      const double floor = 10.0 / static_cast<double>(r.samples);
      if (!(row.p_hat > floor) || !(r.E_hat > 0.0)) continue;
      xt.push_back(std::log(r.tau));
      xe.push_back(std::log(r.E_hat));
      y.push_back(std::log(row.p_hat));
    }
    sf.vs_tau = least_squares(xt, y, 4);
    sf.vs_E = least_squares(xe, y, 4);
    table.strata.push_back(sf);
  }
  return table;
}

namespace detail {

struct CellInfo {
  int K = 0;
  bool degenerate = false;
};

/// Concurrent cell memo; entries are pure functions of the key, so racing
/// writers store identical values.
class CellMemo {
 public:
  template <class Fn>
  CellInfo get_or_compute(const QuantIndex& k, Fn&& compute) {
    Shard& s = shards_[QuantIndexHash{}(k) % shards_.size()];
    {
      std::lock_guard<std::mutex> lock(s.mutex);
      auto it = s.map.find(k);
      if (it != s.map.end()) return it->second;
    }
    const CellInfo info = compute();
    std::lock_guard<std::mutex> lock(s.mutex);
    s.map[k] = info;
    return info;
  }

  std::int64_t size() const {
    std::int64_t n = 0;
    for (const auto& s : shards_) n += static_cast<std::int64_t>(s.map.size());
    return n;
  }

 private:
  struct Shard {
    std::mutex mutex;
    std::unordered_map<QuantIndex, CellInfo, QuantIndexHash> map;
  };
  std::array<Shard, 64> shards_;
};

}  // namespace detail

inline void validate(const ExperimentConfig& cfg) {
  const int n = cfg.basis.dim();
  require(cfg.objective.dim() == n && cfg.data_norm.dim() == n && cfg.recon_norm.dim() == n,
          ErrorCode::config, "norm dimensions must match the basis dimension");
  require(cfg.tau_prime > 0.0 && std::isfinite(cfg.tau_prime), ErrorCode::config,
          "tau_prime must be positive");
  require(!cfg.tau_ladder.empty(), ErrorCode::config, "tau_ladder must not be empty");
  for (std::size_t i = 0; i < cfg.tau_ladder.size(); ++i) {
    require(cfg.tau_ladder[i] > 0.0 && cfg.tau_ladder[i] < cfg.tau_prime, ErrorCode::config,
            "tau_ladder entries must lie in (0, tau_prime)");
    if (i > 0)
      require(cfg.tau_ladder[i] < cfg.tau_ladder[i - 1], ErrorCode::config,
              "tau_ladder must be strictly decreasing");
  }
  require(cfg.samples_per_tau > 0, ErrorCode::config, "samples_per_tau must be positive");
  require(cfg.audit_stride > 0, ErrorCode::config, "audit_stride must be positive");
  require_objective(cfg.objective);
  require_data_norm(cfg.data_norm);
}

/**
 * Monte Carlo estimate of P(#active = K) and of the mean reconstruction
 * error for U uniform in {f_d <= tau'}, on every rung of the tau ladder,
 * with the grid-count constants and exponent fits.
 *
 * The active-set size of a sample depends only on its cell, so cell solves
 * are memoized per rung. Sample i of rung r draws from a stream derived from
 * (seed, r, i), and partial sums are reduced in a fixed chunk order, so the
 * report does not depend on the worker count.
 */
inline ScalingReport run_scaling(const ExperimentConfig& cfg) {
  validate(cfg);
  const int n = cfg.basis.dim();
  ScalingReport report;
  report.N = n;
  report.tau_prime = cfg.tau_prime;
  report.samples_per_tau = cfg.samples_per_tau;
  report.seed = cfg.seed;
  report.threads = resolve_threads(cfg.threads);

  report.objective_diagnostic = check_hypotheses(cfg.objective, cfg.hypothesis_samples, cfg.seed);
  if (report.objective_diagnostic.lipschitz_estimate_hinv > 10.0)
    report.warnings.push_back("objective " + cfg.objective.describe() +
                              ": inverse Gauss map Lipschitz estimate " +
                              std::to_string(report.objective_diagnostic.lipschitz_estimate_hinv) +
                              " is large; the curvature hypothesis may fail");

  const BallSampler sampler(cfg.data_norm, cfg.basis, cfg.tau_prime);
  report.B = ball_cell_ratio(cfg.data_norm, cfg.tau_prime, cfg.basis);
  report.C = mean_cell_norm(cfg.recon_norm, cfg.basis, cfg.c_method, cfg.c_budget, cfg.seed);
  report.M = cell_sup_constant(cfg.data_norm, cfg.basis);

  const auto chunk = static_cast<std::int64_t>(detail::kChunk);
  for (std::size_t r = 0; r < cfg.tau_ladder.size(); ++r) {
    const double tau = cfg.tau_ladder[r];
    detail::CellMemo memo;

    struct Tally {
      std::vector<std::int64_t> counts;
      std::int64_t degenerate = 0, proposals = 0, audited = 0, mismatches = 0;
      double err = 0.0, err2 = 0.0;
    };
    const auto n_chunks = static_cast<std::size_t>((cfg.samples_per_tau + chunk - 1) / chunk);
    std::vector<Tally> tallies(n_chunks);

    parallel_for(n_chunks, report.threads, [&](std::size_t c) {
      Tally t;
      t.counts.assign(static_cast<std::size_t>(n + 1), 0);
      const std::int64_t begin = static_cast<std::int64_t>(c) * chunk;
      const std::int64_t end = std::min(cfg.samples_per_tau, begin + chunk);
      for (std::int64_t i = begin; i < end; ++i) {
        CounterRng rng(cfg.seed, r, static_cast<std::uint64_t>(i));
        const Vector u = sampler.sample(rng, &t.proposals);
        const QuantIndex k = quantize(u, tau, cfg.basis);
        const detail::CellInfo info = memo.get_or_compute(k, [&] {
          const SolveResult s = solve_cell(k, tau, cfg.objective, cfg.basis, cfg.solver);
          return detail::CellInfo{s.pattern.K(), s.degenerate};
        });
        const double e = cell_error(u, k, tau, cfg.basis, cfg.recon_norm);
        t.err += e;
        t.err2 += e * e;
        if (info.degenerate) {
          ++t.degenerate;
          continue;
        }
        ++t.counts[static_cast<std::size_t>(info.K)];
        if (i % cfg.audit_stride == 0) {
          ++t.audited;
          const Code code = encode(u, tau, cfg.objective, cfg.basis, cfg.solver);
          if (code.size() != info.K) ++t.mismatches;
        }
      }
      tallies[c] = std::move(t);
    });

    RungReport rung;
    rung.tau = tau;
    rung.samples = cfg.samples_per_tau;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(n + 1), 0);
    double err = 0.0, err2 = 0.0;
    for (const auto& t : tallies) {
      for (int K = 0; K <= n; ++K) counts[static_cast<std::size_t>(K)] += t.counts[static_cast<std::size_t>(K)];
      rung.degenerate += t.degenerate;
      rung.proposals += t.proposals;
      rung.audited += t.audited;
      rung.audit_mismatches += t.mismatches;
      err += t.err;
      err2 += t.err2;
    }
    rung.memo_cells = memo.size();
    rung.acceptance = static_cast<double>(rung.samples) / static_cast<double>(rung.proposals);
    const double ns = static_cast<double>(rung.samples);
    rung.E_hat = err / ns;
    rung.E_se = std::sqrt(std::max(0.0, err2 / ns - rung.E_hat * rung.E_hat) / ns);
    const double effective = static_cast<double>(rung.samples - rung.degenerate);

    std::optional<GridCensus> census;
    if (cfg.grid_counts)
      census = grid_census(tau, cfg.tau_prime, cfg.objective, cfg.data_norm, cfg.basis, cfg.solver,
                           EnumerationOptions{report.threads, cfg.enumeration_budget});

    for (int K = 0; K <= n; ++K) {
      StratumRow row;
      row.K = K;
      row.count = counts[static_cast<std::size_t>(K)];
      row.p_hat = effective > 0.0 ? static_cast<double>(row.count) / effective : 0.0;
      row.se = effective > 0.0 ? std::sqrt(row.p_hat * (1.0 - row.p_hat) / effective) : 0.0;
      const double weight = std::pow(tau, K - n);
      row.scaled_prob = row.p_hat * weight;
      if (census) {
        const GridCount& g = census->by_k[static_cast<std::size_t>(K)];
        row.grid = g;
        const double tk = std::pow(tau, K);
        row.consistency_gap = std::abs(row.p_hat * weight * report.B - g.scaled);
        row.consistency_allowance = 3.0 * row.se * weight * report.B +
                                    tk * static_cast<double>(g.count_hi - g.count_lo);
      }
      rung.strata.push_back(row);
    }
    if (rung.degenerate > 0)
      report.warnings.push_back("tau=" + std::to_string(tau) + ": " +
                                std::to_string(rung.degenerate) +
                                " degenerate samples excluded from the stratum counts");
    if (rung.audit_mismatches > 0)
      report.warnings.push_back("tau=" + std::to_string(tau) + ": " +
                                std::to_string(rung.audit_mismatches) +
                                " audited samples disagree with the memoized cell");
    report.rungs.push_back(std::move(rung));
  }

  for (int K = 0; K <= n; ++K) {
    StratumConstants sc;
    sc.K = K;
    const RungReport& finest = report.rungs.back();
    const auto& row = finest.strata[static_cast<std::size_t>(K)];
    if (row.grid) {
      sc.A = row.grid->scaled;
      if (K >= 1 && *sc.A > 0.0 && report.C.value > 0.0) {
        const LawConstants lc = law_constants(*sc.A, report.B, report.C.value, n, K);
        sc.D = lc.D;
        sc.D_prime = lc.D_prime;
      }
    }
    report.constants.push_back(sc);
  }
  report.fits = fit_exponents(report);
  return report;
}

}  // namespace quantlab

#endif  // QUANTLAB_SCALING_HPP_
