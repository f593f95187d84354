#ifndef QUANTLAB_CLI_HPP_
#define QUANTLAB_CLI_HPP_

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/codec.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/geometry.hpp"
#include "quantlab/io.hpp"
#include "quantlab/norms.hpp"
#include "quantlab/scaling.hpp"

namespace quantlab::cli {

enum ExitCode : int { ok = 0, usage = 1, hypothesis = 2, runtime_budget = 3 };

inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::hypothesis_violation:
    case ErrorCode::degenerate_gradient:
      return hypothesis;
    case ErrorCode::enumeration_budget_exceeded:
    case ErrorCode::acceptance_too_low:
    case ErrorCode::dimension_too_large:
    case ErrorCode::max_iterations:
      return runtime_budget;
    default:
      return usage;
  }
}

/// Inverse Gauss map Lipschitz estimates above this are reported as a
/// warning (nearly flat pieces of the level set).
inline constexpr double kLipschitzWarn = 10.0;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> tol;
  std::optional<double> eps_active_rel;
  std::string out_dir = ".";

  std::string norm = "sep-quad";
  std::string basis = "identity";
  std::string input;
  std::string output;
  std::optional<double> tau;
  int dim = 0;
  int samples = 200;
  std::optional<int> K;
};

namespace detail {

inline std::string join_args(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

inline SolverOptions solver_with_overrides(SolverOptions opt, const Options& o) {
  if (o.tol) opt.tol = *o.tol;
  if (o.eps_active_rel) opt.eps_active_rel = *o.eps_active_rel;
  require(opt.tol > 0.0, ErrorCode::config, "--tol: must be positive");
  require(opt.eps_active_rel > 0.0, ErrorCode::config, "--eps-active-rel: must be positive");
  return opt;
}

inline std::pair<ExperimentConfig, Json> load_config(const Options& o) {
  require(!o.config.empty(), ErrorCode::config, "--config: required");
  Json j = io::read_json_file(o.config);
  ExperimentConfig cfg = config_from_json(j);
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  cfg.threads = resolve_threads(cfg.threads);
  cfg.solver = solver_with_overrides(cfg.solver, o);
  return {std::move(cfg), std::move(j)};
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_text(path, text);
  }
}

inline std::string fmt(double v, int precision = 6) {
  if (!std::isfinite(v)) return "n/a";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline std::string fmt(const std::optional<double>& v, int precision = 6) {
  return v ? fmt(*v, precision) : std::string("n/a");
}

}  // namespace detail

inline int cmd_check_norm(const Options& o, std::ostream& out, std::ostream& err) {
  const Json spec = io::json_argument(o.norm);
  const int dim = o.dim > 0 ? o.dim : 2;
  const NormModel f = io::norm_from_json(spec, dim, "--norm");
  require_objective(f);
  const CurvatureDiagnostic d = check_hypotheses(f, o.samples, o.seed.value_or(0));
  out << "norm: " << f.describe() << "\n"
      << "samples: " << d.samples << "\n"
      << "strict_convexity_margin: " << detail::fmt(d.strict_convexity_margin) << "\n"
      << "lipschitz_estimate_hinv: " << detail::fmt(d.lipschitz_estimate_hinv) << "\n";
  if (d.lipschitz_estimate_hinv > kLipschitzWarn) {
    err << "warning: level set is barely curved (margin " << detail::fmt(d.strict_convexity_margin)
        << ", inverse Gauss map Lipschitz estimate " << detail::fmt(d.lipschitz_estimate_hinv)
        << "); scaling results may converge slowly\n";
    out << "verdict: warning\n";
  } else {
    out << "verdict: pass\n";
  }
  return ok;
}

inline int cmd_encode(const Options& o, std::ostream& out) {
  require(!o.input.empty(), ErrorCode::config, "--input: required");
  require(o.tau.has_value(), ErrorCode::config, "--tau: required");
  Json in = io::json_argument(o.input);
  if (in.is_object()) in = in.value("u", Json());
  const Vector u = io::vector_from_json(in, "input");
  const int n = static_cast<int>(u.size());
  const Basis basis = io::basis_from_json(io::json_argument(o.basis), n, "--basis");
  const NormModel f = io::norm_from_json(io::json_argument(o.norm), n, "--norm");
  const SolverOptions opt = detail::solver_with_overrides({}, o);
  const Code code = encode(u, *o.tau, f, basis, opt);
  detail::emit(o.output, io::code_to_json(code).dump() + "\n", out);
  return ok;
}

inline int cmd_decode(const Options& o, std::ostream& out) {
  require(!o.input.empty(), ErrorCode::config, "--input: required");
  const Code code = io::code_from_json(io::json_argument(o.input));
  const Basis basis = io::basis_from_json(io::json_argument(o.basis), code.n, "--basis");
  const NormModel f = io::norm_from_json(io::json_argument(o.norm), code.n, "--norm");
  const SolverOptions opt = detail::solver_with_overrides({}, o);
  const DecodeResult r = decode(code, f, basis, opt);
  const Json j{{"k", r.k.k}, {"reconstruction", io::vector_to_json(r.reconstruction)}};
  detail::emit(o.output, j.dump() + "\n", out);
  return ok;
}

inline void print_report(const ScalingReport& r, std::ostream& out) {
  out << "N=" << r.N << " tau'=" << r.tau_prime << " samples/rung=" << r.samples_per_tau
      << " B=" << detail::fmt(r.B, 10) << " C=" << detail::fmt(r.C.value, 10) << " (" << r.C.method
      << ", +-" << detail::fmt(r.C.error, 3) << ") M=" << detail::fmt(r.M) << "\n";
  out << std::left << std::setw(12) << "tau" << std::setw(4) << "K" << std::setw(14) << "p_hat"
      << std::setw(12) << "se" << std::setw(14) << "E_hat" << std::setw(14) << "scaled_prob"
      << "grid tau^K*count\n";
  for (const auto& rung : r.rungs)
    for (const auto& s : rung.strata)
      out << std::setw(12) << detail::fmt(rung.tau) << std::setw(4) << s.K << std::setw(14)
          << detail::fmt(s.p_hat) << std::setw(12) << detail::fmt(s.se, 3) << std::setw(14)
          << detail::fmt(rung.E_hat) << std::setw(14) << detail::fmt(s.scaled_prob)
          << (s.grid ? detail::fmt(s.grid->scaled) : std::string("-")) << "\n";
  out << "fits (slope, 95% CI):\n";
  const auto& e = r.fits.error_vs_tau;
  out << "  log E vs log tau: " << (e.ok ? detail::fmt(e.slope) + " [" + detail::fmt(e.ci_lo) + ", " +
                                               detail::fmt(e.ci_hi) + "]"
                                         : e.reason)
      << "\n";
  for (const auto& s : r.fits.strata) {
    out << "  K=" << s.K << ": log p vs log tau "
        << (s.vs_tau.ok ? detail::fmt(s.vs_tau.slope) + " [" + detail::fmt(s.vs_tau.ci_lo) + ", " +
                              detail::fmt(s.vs_tau.ci_hi) + "]"
                        : s.vs_tau.reason)
        << "; vs log E " << (s.vs_E.ok ? detail::fmt(s.vs_E.slope) : s.vs_E.reason)
        << "; N-K=" << s.counting_exponent << ", (N-K)/(N+1)=" << detail::fmt(s.law_exponent) << "\n";
  }
  out << "constants:\n";
  for (const auto& c : r.constants)
    out << "  K=" << c.K << ": A_K=" << detail::fmt(c.A) << " D_K=" << detail::fmt(c.D)
        << " Dprime_K=" << detail::fmt(c.D_prime) << "\n";
}

inline int cmd_experiment(const Options& o, const std::string& command_line, std::ostream& out,
                          std::ostream& err) {
  auto [cfg, raw] = detail::load_config(o);
  RunManifest m = RunManifest::begin(command_line, raw, cfg.seed, cfg.threads, cfg.solver);
  m.enumeration_budget = cfg.enumeration_budget;
  const ScalingReport report = run_scaling(cfg);
  m.finished = io::utc_timestamp();

  const std::filesystem::path dir(o.out_dir);
  const Json j{{"manifest", manifest_to_json(m)}, {"config", config_to_json(cfg)},
               {"report", report_to_json(report)}};
  write_text(dir / "report.json", j.dump(2) + "\n");
  write_text(dir / "scaling.csv", scaling_csv(report, m));
  write_text(dir / "counts.csv", counts_csv(report_grid_counts(report), m));
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  print_report(report, out);
  out << "wrote " << (dir / "report.json").string() << ", scaling.csv, counts.csv\n";
  return ok;
}

inline int cmd_count_grid(const Options& o, const std::string& command_line, std::ostream& out) {
  auto [cfg, raw] = detail::load_config(o);
  RunManifest m = RunManifest::begin(command_line, raw, cfg.seed, cfg.threads, cfg.solver);
  m.enumeration_budget = cfg.enumeration_budget;
  const std::vector<double> ladder = o.tau ? std::vector<double>{*o.tau} : cfg.tau_ladder;
  const EnumerationOptions en{cfg.threads, cfg.enumeration_budget};
  std::vector<GridCount> rows;
  Json censuses = Json::array();
  for (double tau : ladder) {
    const GridCensus c = grid_census(tau, cfg.tau_prime, cfg.objective, cfg.data_norm, cfg.basis,
                                     cfg.solver, en);
    Json jc{{"tau", tau}, {"M", c.M}, {"total_in_ball", c.total_in_ball},
            {"enumerated", c.enumerated}, {"degenerate", c.degenerate}, {"by_k", Json::array()}};
    for (const auto& g : c.by_k) {
      if (o.K && g.K != *o.K) continue;
      rows.push_back(g);
      jc["by_k"].push_back(io::grid_count_to_json(g));
    }
    censuses.push_back(std::move(jc));
  }
  m.finished = io::utc_timestamp();
  const std::filesystem::path dir(o.out_dir);
  write_text(dir / "counts.csv", counts_csv(rows, m));
  write_text(dir / "counts.json",
             Json{{"manifest", manifest_to_json(m)}, {"censuses", censuses}}.dump(2) + "\n");
  out << std::left << std::setw(12) << "tau" << std::setw(4) << "K" << std::setw(12) << "count"
      << std::setw(14) << "tau^K*count" << std::setw(12) << "count_lo" << "count_hi\n";
  for (const auto& g : rows)
    out << std::setw(12) << detail::fmt(g.tau) << std::setw(4) << g.K << std::setw(12) << g.count
        << std::setw(14) << detail::fmt(g.scaled, 10) << std::setw(12) << g.count_lo << g.count_hi
        << "\n";
  return ok;
}

inline int cmd_constants(const Options& o, const std::string& command_line, std::ostream& out) {
  auto [cfg, raw] = detail::load_config(o);
  RunManifest m = RunManifest::begin(command_line, raw, cfg.seed, cfg.threads, cfg.solver);
  m.enumeration_budget = cfg.enumeration_budget;
  const int n = cfg.basis.dim();
  const double B = compute_B(cfg.data_norm, cfg.tau_prime, cfg.basis);
  const ConstantEstimate B_mc =
      ball_cell_ratio_montecarlo(cfg.data_norm, cfg.tau_prime, cfg.basis, cfg.c_budget, cfg.seed);
  const ConstantEstimate C_q =
      compute_C(cfg.recon_norm, cfg.basis, IntegrationMethod::quadrature, cfg.c_budget);
  const ConstantEstimate C_mc =
      compute_C(cfg.recon_norm, cfg.basis, IntegrationMethod::montecarlo, cfg.c_budget, cfg.seed);
  const ConstantEstimate& C = cfg.c_method == IntegrationMethod::quadrature ? C_q : C_mc;
  const double M = cell_sup_constant(cfg.data_norm, cfg.basis);

  auto estimate_json = [](const ConstantEstimate& e) {
    return Json{{"value", e.value}, {"error", e.error}, {"points", e.points}, {"method", e.method}};
  };
  Json strata = Json::array();
  out << "B=" << detail::fmt(B, 12) << " (Monte Carlo " << detail::fmt(B_mc.value) << " +- "
      << detail::fmt(B_mc.error, 3) << ")\n"
      << "C=" << detail::fmt(C_q.value, 12) << " (quadrature, delta " << detail::fmt(C_q.error, 3)
      << "), " << detail::fmt(C_mc.value, 8) << " +- " << detail::fmt(C_mc.error, 3)
      << " (Monte Carlo)\n"
      << "M=" << detail::fmt(M) << "\n";
  if (cfg.grid_counts) {
    const double tau = cfg.tau_ladder.back();
    const GridCensus census = grid_census(tau, cfg.tau_prime, cfg.objective, cfg.data_norm,
                                          cfg.basis, cfg.solver,
                                          EnumerationOptions{cfg.threads, cfg.enumeration_budget});
    for (int K = 0; K <= n; ++K) {
      const double A = census.by_k[static_cast<std::size_t>(K)].scaled;
      Json row{{"K", K}, {"A_K", A}, {"tau", tau}, {"D_K", Json()}, {"Dprime_K", Json()}};
      out << "K=" << K << ": A_K=" << detail::fmt(A, 10);
      if (K >= 1 && A > 0.0) {
        const LawConstants lc = compute_D_K(A, B, C.value, n, K);
        row["D_K"] = lc.D;
        row["Dprime_K"] = lc.D_prime;
        out << " D_K=" << detail::fmt(lc.D, 10) << " Dprime_K=" << detail::fmt(lc.D_prime, 10);
      }
      out << "\n";
      strata.push_back(std::move(row));
    }
  }
  m.finished = io::utc_timestamp();
  const Json j{{"manifest", manifest_to_json(m)},
               {"B", B},
               {"B_montecarlo", estimate_json(B_mc)},
               {"C", estimate_json(C)},
               {"C_quadrature", estimate_json(C_q)},
               {"C_montecarlo", estimate_json(C_mc)},
               {"M", M},
               {"strata", strata}};
  write_text(std::filesystem::path(o.out_dir) / "constants.json", j.dump(2) + "\n");
  return ok;
}

inline int cmd_fit(const Options& o, std::ostream& out) {
  require(!o.input.empty(), ErrorCode::config, "--input: required (a report.json)");
  Json j = io::read_json_file(o.input);
  if (j.contains("report")) j = j["report"];
  ScalingReport r = report_from_json(j);
  r.fits = fit_exponents(r);
  const auto& e = r.fits.error_vs_tau;
  out << "log E vs log tau: " << (e.ok ? detail::fmt(e.slope) : e.reason) << "\n";
  for (const auto& s : r.fits.strata)
    out << "K=" << s.K << ": slope_tau=" << (s.vs_tau.ok ? detail::fmt(s.vs_tau.slope) : s.vs_tau.reason)
        << " ci=[" << detail::fmt(s.vs_tau.ci_lo) << ", " << detail::fmt(s.vs_tau.ci_hi) << "]"
        << " slope_E=" << (s.vs_E.ok ? detail::fmt(s.vs_E.slope) : s.vs_E.reason)
        << " N-K=" << s.counting_exponent << " (N-K)/(N+1)=" << detail::fmt(s.law_exponent) << "\n";
  if (!o.output.empty()) write_text(o.output, fits_to_json(r.fits).dump(2) + "\n");
  return ok;
}

/**
 * Entry point shared by the executable and the tests. Exit codes: 0 success,
 * 1 usage or configuration error, 2 hypothesis gate, 3 runtime budget.
 */
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Quantization by norm-minimizing projection onto cells", "quantlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "RNG seed (overrides the config)");
    sub->add_option("--threads", o.threads, "worker threads (fallback: QUANTLAB_THREADS)");
    sub->add_option("--tol", o.tol, "solver KKT tolerance");
    sub->add_option("--eps-active-rel", o.eps_active_rel, "active-face tolerance relative to tau");
    sub->add_option("--out-dir", o.out_dir, "directory for report files");
  };

  auto* check = app.add_subcommand("check-norm", "sample the curvature hypotheses of a norm");
  check->add_option("--norm", o.norm, "norm spec: JSON, file, or kind name")->required();
  check->add_option("--dim", o.dim, "dimension (default 2)");
  check->add_option("--samples", o.samples, "level-set samples")->check(CLI::Range(100, 100000));
  common(check);

  auto* enc = app.add_subcommand("encode", "encode a vector");
  enc->add_option("--input", o.input, "vector: JSON array, {\"u\": [...]}, or file")->required();
  enc->add_option("--tau", o.tau, "quantization step")->required();
  enc->add_option("--norm", o.norm, "objective norm spec");
  enc->add_option("--basis", o.basis, "\"identity\" or a matrix (columns are basis vectors)");
  enc->add_option("--output", o.output, "output file (default stdout)");
  common(enc);

  auto* dec = app.add_subcommand("decode", "decode a code");
  dec->add_option("--input", o.input, "code JSON or file")->required();
  dec->add_option("--norm", o.norm, "objective norm spec");
  dec->add_option("--basis", o.basis, "\"identity\" or a matrix");
  dec->add_option("--output", o.output, "output file (default stdout)");
  common(dec);

  auto* exp = app.add_subcommand("experiment", "run the scaling experiment");
  exp->add_option("--config", o.config, "experiment config JSON")->required();
  common(exp);

  auto* cnt = app.add_subcommand("count-grid", "grid counts per active-set size");
  cnt->add_option("--config", o.config, "experiment config JSON")->required();
  cnt->add_option("--tau", o.tau, "single step instead of the config ladder");
  cnt->add_option("--K", o.K, "report only this active-set size");
  common(cnt);

  auto* cst = app.add_subcommand("constants", "ball, cell and law constants");
  cst->add_option("--config", o.config, "experiment config JSON")->required();
  common(cst);

  auto* fit = app.add_subcommand("fit", "refit exponents from a report");
  fit->add_option("--input", o.input, "report.json")->required();
  fit->add_option("--output", o.output, "write the fit table as JSON");
  common(fit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  const std::string command_line = detail::join_args(argc, argv);
  try {
    if (*check) return cmd_check_norm(o, out, err);
    if (*enc) return cmd_encode(o, out);
    if (*dec) return cmd_decode(o, out);
    if (*exp) return cmd_experiment(o, command_line, out, err);
    if (*cnt) return cmd_count_grid(o, command_line, out);
    if (*cst) return cmd_constants(o, command_line, out);
    if (*fit) return cmd_fit(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return usage;
  }
  return usage;
}

}  // namespace quantlab::cli

#endif  // QUANTLAB_CLI_HPP_
