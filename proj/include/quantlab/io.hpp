#ifndef QUANTLAB_IO_HPP_
#define QUANTLAB_IO_HPP_

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quantlab/basis.hpp"
#include "quantlab/codec.hpp"
#include "quantlab/errors.hpp"
#include "quantlab/geometry.hpp"
#include "quantlab/norms.hpp"
#include "quantlab/projection.hpp"
#include "quantlab/scaling.hpp"

namespace quantlab {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

namespace io {

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

/// Matrices are stored row-major; the columns of a basis matrix are the
/// basis vectors.
inline Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

inline Vector vector_from_json(const Json& j, const std::string& key) {
  require(j.is_array() && !j.empty(), ErrorCode::config, key + ": expected a non-empty number array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), ErrorCode::config, key + ": entry " + std::to_string(i) + " is not a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline Matrix matrix_from_json(const Json& j, const std::string& key) {
  require(j.is_array() && !j.empty() && j[0].is_array(), ErrorCode::config,
          key + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[static_cast<std::size_t>(r)], key);
    require(row.size() == cols, ErrorCode::config, key + ": rows have different lengths");
    m.row(r) = row.transpose();
  }
  return m;
}

template <class T>
T get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(ErrorCode::config, key + ": " + e.what());
  }
}

template <class T>
T get_required(const Json& j, const std::string& key) {
  require(j.contains(key), ErrorCode::config, key + ": missing");
  return get_or<T>(j, key, T{});
}

/// "identity", or a square matrix whose columns are the basis vectors.
inline Basis basis_from_json(const Json& j, int n, const std::string& key = "basis") {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "identity")) {
    require(n > 0, ErrorCode::config, key + ": identity basis needs a dimension");
    return Basis::identity(n);
  }
  require(j.is_array(), ErrorCode::config, key + ": expected \"identity\" or a matrix");
  const Matrix m = matrix_from_json(j, key);
  require(m.rows() == m.cols(), ErrorCode::config, key + ": basis matrix must be square");
  require(n <= 0 || m.rows() == n, ErrorCode::config,
          key + ": basis dimension " + std::to_string(m.rows()) + " differs from dim " + std::to_string(n));
  try {
    return Basis(m);
  } catch (const Error& e) {
    fail(e.code(), key + ": " + e.what());
  }
}

inline Json basis_to_json(const Basis& b) { return matrix_to_json(b.matrix()); }

/**
 * Norm specs: {"kind": ..., optional "weights", "p", "Q", "frame"} or a bare
 * kind string. Kinds: sep-quad, euclidean, ellipsoidal, p-power, p-norm,
 * l1, sup.
 */
inline NormModel norm_from_json(const Json& j, int n, const std::string& key) {
  Json spec = j;
  if (spec.is_string()) spec = Json{{"kind", spec.get<std::string>()}};
  require(spec.is_object(), ErrorCode::config, key + ": expected a norm object or kind name");
  const auto kind = get_required<std::string>(spec, "kind");
  const std::string where = key + ".";

  Vector weights;
  if (spec.contains("weights")) weights = vector_from_json(spec["weights"], where + "weights");
  std::optional<Frame> frame;
  if (spec.contains("frame")) {
    const auto f = get_or<std::string>(spec, "frame", "");
    require(f == "coords" || f == "ambient", ErrorCode::config,
            where + "frame: expected \"coords\" or \"ambient\"");
    frame = f == "coords" ? Frame::coords : Frame::ambient;
  }
  const double scale = get_or<double>(spec, "scale", 1.0);
  require(std::isfinite(scale) && scale > 0.0, ErrorCode::config, where + "scale: must be positive");
  auto scaled = [scale](NormModel m) { return scale == 1.0 ? m : m.scaled(scale); };
  const Frame coords = frame.value_or(Frame::coords);
  const Frame ambient = frame.value_or(Frame::ambient);
  if (weights.size() > 0 && n > 0)
    require(weights.size() == n, ErrorCode::config, where + "weights: length differs from dim");
  if (n <= 0 && weights.size() > 0) n = static_cast<int>(weights.size());

  try {
    if (kind == "sep-quad") {
      require(n > 0, ErrorCode::config, key + ": dimension unknown");
      return scaled(NormModel::separable_quadratic(weights.size() ? weights : Vector::Ones(n), coords));
    }
    if (kind == "ellipsoidal") {
      require(spec.contains("Q"), ErrorCode::config, where + "Q: missing");
      const Matrix q = matrix_from_json(spec["Q"], where + "Q");
      require(n <= 0 || q.rows() == n, ErrorCode::config, where + "Q: size differs from dim");
      return scaled(NormModel::ellipsoidal(q, ambient));
    }
    require(n > 0, ErrorCode::config, key + ": dimension unknown");
    if (kind == "euclidean") return scaled(NormModel::euclidean(n, ambient));
    if (kind == "l1") return scaled(NormModel::p_norm(n, 1.0, weights, ambient));
    if (kind == "sup") return scaled(NormModel::sup(n, weights, ambient));
    if (kind == "p-power") return scaled(NormModel::p_power(n, get_required<double>(spec, "p"), weights, coords));
    if (kind == "p-norm") return scaled(NormModel::p_norm(n, get_required<double>(spec, "p"), weights, ambient));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    fail(ErrorCode::config, key + ": " + e.what());
  }
  fail(ErrorCode::config, where + "kind: unknown norm kind \"" + kind + "\"");
}

inline Json norm_to_json(const NormModel& f) {
  Json j;
  j["kind"] = f.kind() == NormKind::p_norm && f.exponent() == 1.0 ? "l1" : to_string(f.kind());
  j["frame"] = to_string(f.frame());
  switch (f.kind()) {
    case NormKind::separable_quadratic:
    case NormKind::sup:
      j["weights"] = vector_to_json(f.weights());
      break;
    case NormKind::p_power:
    case NormKind::p_norm:
      j["p"] = f.exponent();
      j["weights"] = vector_to_json(f.weights());
      break;
    case NormKind::ellipsoidal:
      j["Q"] = matrix_to_json(f.q());
      break;
    default:
      break;
  }
  if (f.scale() != 1.0) j["scale"] = f.scale();
  return j;
}

inline Json code_to_json(const Code& code) {
  Json entries = Json::array();
  for (const auto& e : code.entries) entries.push_back(Json::array({e.index, e.value}));
  return Json{{"tau", code.tau}, {"n", code.n}, {"entries", entries}};
}

inline Code code_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::config, "code: expected an object");
  Code code;
  code.tau = get_required<double>(j, "tau");
  code.n = get_required<int>(j, "n");
  require(j.contains("entries") && j["entries"].is_array(), ErrorCode::config,
          "entries: expected an array of [index, value] pairs");
  for (const auto& e : j["entries"]) {
    require(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number(),
            ErrorCode::config, "entries: expected [index, value] pairs");
    code.entries.push_back({e[0].get<int>(), e[1].get<double>()});
  }
  validate(code);
  return code;
}

inline Json solver_to_json(const SolverOptions& opt) {
  return Json{{"tol", opt.tol}, {"eps_active_rel", opt.eps_active_rel},
              {"max_iterations", opt.max_iterations}};
}

inline SolverOptions solver_from_json(const Json& j) {
  SolverOptions opt;
  if (j.is_null()) return opt;
  require(j.is_object(), ErrorCode::config, "solver: expected an object");
  opt.tol = get_or<double>(j, "tol", opt.tol);
  opt.eps_active_rel = get_or<double>(j, "eps_active_rel", opt.eps_active_rel);
  opt.max_iterations = get_or<int>(j, "max_iterations", opt.max_iterations);
  require(opt.tol > 0.0, ErrorCode::config, "solver.tol: must be positive");
  require(opt.eps_active_rel > 0.0, ErrorCode::config, "solver.eps_active_rel: must be positive");
  require(opt.max_iterations > 0, ErrorCode::config, "solver.max_iterations: must be positive");
  return opt;
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::config, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::config, path.string() + ": " + e.what());
  }
}

/// Inline JSON text, a path to a JSON file, or a bare word (kept as a string).
inline Json json_argument(const std::string& text) {
  if (text.empty()) return Json();
  const char c = text.front();
  if (c == '{' || c == '[' || c == '"' || c == '-' || (c >= '0' && c <= '9')) {
    try {
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::config, "cannot parse '" + text + "': " + e.what());
    }
  }
  if (std::filesystem::exists(text)) return read_json_file(text);
  return Json(text);
}

/// 64-bit FNV-1a, used to fingerprint configurations.
inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace io

// --- experiment configuration ------------------------------------------------

/**
 * Experiment config (JSON):
 *   dim, basis ("identity" or rows), objective, data_norm, recon_norm,
 *   tau_prime, tau_ladder, samples_per_tau, seed, threads,
 *   solver {tol, eps_active_rel, max_iterations},
 *   constants {c_method: quadrature|montecarlo, c_budget},
 *   grid_counts, enumeration_budget, audit_stride.
 * "f", "f_d" are accepted for objective and data_norm.
 */
inline ExperimentConfig config_from_json(const Json& j) {
  require(j.is_object(), ErrorCode::config, "config: expected a JSON object");
  int n = io::get_or<int>(j, "dim", 0);
  if (n <= 0 && j.contains("basis") && j["basis"].is_array()) n = static_cast<int>(j["basis"].size());
  require(n > 0, ErrorCode::config, "dim: missing or not positive");

  auto pick = [&](const char* a, const char* b) -> const Json& {
    if (j.contains(a)) return j[a];
    require(j.contains(b), ErrorCode::config, std::string(a) + ": missing");
    return j[b];
  };

  ExperimentConfig cfg(io::basis_from_json(j.contains("basis") ? j["basis"] : Json(), n),
                       io::norm_from_json(pick("objective", "f"), n, "objective"),
                       io::norm_from_json(pick("data_norm", "f_d"), n, "data_norm"),
                       io::norm_from_json(pick("recon_norm", "recon"), n, "recon_norm"));
  cfg.tau_prime = io::get_required<double>(j, "tau_prime");
  require(j.contains("tau_ladder"), ErrorCode::config, "tau_ladder: missing");
  require(j["tau_ladder"].is_array(), ErrorCode::config, "tau_ladder: expected an array");
  require(!j["tau_ladder"].empty(), ErrorCode::config, "tau_ladder: must not be empty");
  cfg.tau_ladder = io::get_required<std::vector<double>>(j, "tau_ladder");
  cfg.samples_per_tau = io::get_or<std::int64_t>(j, "samples_per_tau", cfg.samples_per_tau);
  cfg.seed = io::get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.threads = io::get_or<int>(j, "threads", 0);
  cfg.solver = io::solver_from_json(j.contains("solver") ? j["solver"] : Json());
  if (j.contains("constants")) {
    const Json& c = j["constants"];
    require(c.is_object(), ErrorCode::config, "constants: expected an object");
    const auto method = io::get_or<std::string>(c, "c_method", "quadrature");
    require(method == "quadrature" || method == "montecarlo", ErrorCode::config,
            "constants.c_method: expected quadrature or montecarlo");
    cfg.c_method = method == "quadrature" ? IntegrationMethod::quadrature : IntegrationMethod::montecarlo;
    cfg.c_budget = io::get_or<std::int64_t>(c, "c_budget", cfg.c_budget);
    require(cfg.c_budget >= 100'000, ErrorCode::config, "constants.c_budget: must be >= 100000");
  }
  cfg.grid_counts = io::get_or<bool>(j, "grid_counts", cfg.grid_counts);
  cfg.enumeration_budget = io::get_or<std::int64_t>(j, "enumeration_budget", cfg.enumeration_budget);
  cfg.audit_stride = io::get_or<std::int64_t>(j, "audit_stride", cfg.audit_stride);
  require(cfg.samples_per_tau > 0, ErrorCode::config, "samples_per_tau: must be positive");
  require(cfg.enumeration_budget > 0, ErrorCode::config, "enumeration_budget: must be positive");
  validate(cfg);
  return cfg;
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  return Json{
      {"dim", cfg.basis.dim()},
      {"basis", io::basis_to_json(cfg.basis)},
      {"objective", io::norm_to_json(cfg.objective)},
      {"data_norm", io::norm_to_json(cfg.data_norm)},
      {"recon_norm", io::norm_to_json(cfg.recon_norm)},
      {"tau_prime", cfg.tau_prime},
      {"tau_ladder", cfg.tau_ladder},
      {"samples_per_tau", cfg.samples_per_tau},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
      {"solver", io::solver_to_json(cfg.solver)},
      {"constants",
       {{"c_method", cfg.c_method == IntegrationMethod::quadrature ? "quadrature" : "montecarlo"},
        {"c_budget", cfg.c_budget}}},
      {"grid_counts", cfg.grid_counts},
      {"enumeration_budget", cfg.enumeration_budget},
      {"audit_stride", cfg.audit_stride},
  };
}

// --- manifest and reports ---------------------------------------------------

struct RunManifest {
  std::string command_line;
  std::string config_hash;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string version = kVersion;
  std::string started;
  std::string finished;
  SolverOptions solver;
  std::int64_t enumeration_budget = 0;

  static RunManifest begin(std::string command_line, const Json& config, std::uint64_t seed,
                           int threads, const SolverOptions& solver) {
    RunManifest m;
    m.command_line = std::move(command_line);
    m.config_hash = io::hex64(io::fnv1a(config.dump()));
    m.seed = seed;
    m.threads = threads;
    m.solver = solver;
    m.started = io::utc_timestamp();
    return m;
  }
};

inline Json manifest_to_json(const RunManifest& m) {
  return Json{{"command_line", m.command_line},
              {"config_hash", m.config_hash},
              {"seed", m.seed},
              {"threads", m.threads},
              {"version", m.version},
              {"started", m.started},
              {"finished", m.finished},
              {"tolerances",
               {{"solver_tol", m.solver.tol},
                {"eps_active_rel", m.solver.eps_active_rel},
                {"max_iterations", m.solver.max_iterations},
                {"radius_slack_rel", 1e-12},
                {"enumeration_budget", m.enumeration_budget}}}};
}

namespace io {

inline Json optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? Json(*v) : Json();
}

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(); }

inline Json fit_to_json(const LinearFit& f) {
  return Json{{"ok", f.ok},
              {"reason", f.reason},
              {"points", f.points},
              {"slope", number_or_null(f.slope)},
              {"intercept", number_or_null(f.intercept)},
              {"ci_lo", number_or_null(f.ci_lo)},
              {"ci_hi", number_or_null(f.ci_hi)}};
}

inline Json grid_count_to_json(const GridCount& g) {
  return Json{{"K", g.K},
              {"tau", g.tau},
              {"tau_prime", g.tau_prime},
              {"count", g.count},
              {"scaled", g.scaled},
              {"count_lo", g.count_lo},
              {"count_hi", g.count_hi},
              {"degenerate_count", g.degenerate_count}};
}

}  // namespace io

inline Json fits_to_json(const FitTable& fits) {
  Json strata = Json::array();
  for (const auto& s : fits.strata)
    strata.push_back(Json{{"K", s.K},
                          {"vs_tau", io::fit_to_json(s.vs_tau)},
                          {"vs_E", io::fit_to_json(s.vs_E)},
                          {"exponent_counting", s.counting_exponent},
                          {"exponent_law", s.law_exponent}});
  return Json{{"error_vs_tau", io::fit_to_json(fits.error_vs_tau)}, {"strata", strata}};
}

inline Json report_to_json(const ScalingReport& r) {
  Json rungs = Json::array();
  for (const auto& rung : r.rungs) {
    Json strata = Json::array();
    for (const auto& s : rung.strata) {
      Json row{{"K", s.K},
               {"count", s.count},
               {"p_hat", s.p_hat},
               {"se", s.se},
               {"scaled_prob", s.scaled_prob},
               {"consistency_gap", io::optional_number(s.consistency_gap)},
               {"consistency_allowance", io::optional_number(s.consistency_allowance)}};
      row["grid"] = s.grid ? io::grid_count_to_json(*s.grid) : Json();
      strata.push_back(std::move(row));
    }
    rungs.push_back(Json{{"tau", rung.tau},
                         {"samples", rung.samples},
                         {"degenerate", rung.degenerate},
                         {"proposals", rung.proposals},
                         {"acceptance", rung.acceptance},
                         {"E_hat", rung.E_hat},
                         {"E_se", rung.E_se},
                         {"audited", rung.audited},
                         {"audit_mismatches", rung.audit_mismatches},
                         {"memo_cells", rung.memo_cells},
                         {"strata", strata}});
  }
  Json constants = Json::array();
  for (const auto& c : r.constants)
    constants.push_back(Json{{"K", c.K},
                             {"A_K", io::optional_number(c.A)},
                             {"D_K", io::optional_number(c.D)},
                             {"Dprime_K", io::optional_number(c.D_prime)}});
  return Json{
      {"N", r.N},
      {"tau_prime", r.tau_prime},
      {"samples_per_tau", r.samples_per_tau},
      {"seed", r.seed},
      {"threads", r.threads},
      {"B", r.B},
      {"C", {{"value", r.C.value}, {"error", r.C.error}, {"points", r.C.points}, {"method", r.C.method}}},
      {"M", r.M},
      {"objective_diagnostic",
       {{"lipschitz_estimate_hinv", io::number_or_null(r.objective_diagnostic.lipschitz_estimate_hinv)},
        {"strict_convexity_margin", r.objective_diagnostic.strict_convexity_margin},
        {"samples", r.objective_diagnostic.samples}}},
      {"rungs", rungs},
      {"constants", constants},
      {"fits", fits_to_json(r.fits)},
      {"warnings", r.warnings},
  };
}

/// Rebuilds the parts of a report needed to refit exponents.
inline ScalingReport report_from_json(const Json& j) {
  ScalingReport r;
  r.N = io::get_required<int>(j, "N");
  r.tau_prime = io::get_or<double>(j, "tau_prime", 0.0);
  r.samples_per_tau = io::get_or<std::int64_t>(j, "samples_per_tau", 0);
  require(j.contains("rungs") && j["rungs"].is_array(), ErrorCode::config, "rungs: missing");
  for (const auto& jr : j["rungs"]) {
    RungReport rung;
    rung.tau = io::get_required<double>(jr, "tau");
    rung.samples = io::get_required<std::int64_t>(jr, "samples");
    rung.E_hat = io::get_required<double>(jr, "E_hat");
    require(jr.contains("strata") && jr["strata"].size() == static_cast<std::size_t>(r.N + 1),
            ErrorCode::config, "rungs.strata: expected N + 1 rows");
    for (const auto& js : jr["strata"]) {
      StratumRow s;
      s.K = io::get_required<int>(js, "K");
      s.count = io::get_or<std::int64_t>(js, "count", 0);
      s.p_hat = io::get_required<double>(js, "p_hat");
      s.se = io::get_or<double>(js, "se", 0.0);
      rung.strata.push_back(s);
    }
    r.rungs.push_back(std::move(rung));
  }
  return r;
}

namespace io {

inline std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

inline std::string csv_number(const std::optional<double>& v) {
  return v ? csv_number(*v) : std::string();
}

inline std::string manifest_line(const RunManifest& m) {
  return "# manifest " + manifest_to_json(m).dump();
}

}  // namespace io

/// One row per (tau, K). The first fifteen columns are the fixed layout;
/// extra columns follow.
inline std::string scaling_csv(const ScalingReport& r, const RunManifest& m) {
  std::ostringstream os;
  os << io::manifest_line(m) << "\n";
  os << "tau,K,p_hat,se,E_hat,scaled_prob,A_K,B,C,D_K,Dprime_K,slope_tau,slope_E,ci_lo,ci_hi,"
        "E_se,count,grid_count,grid_scaled,consistency_gap,consistency_allowance,"
        "exponent_counting,exponent_law,slope_E_ci_lo,slope_E_ci_hi\n";
  using io::csv_number;
  for (const auto& rung : r.rungs) {
    for (const auto& s : rung.strata) {
      const auto k = static_cast<std::size_t>(s.K);
      const StratumConstants& c = r.constants[k];
      const StratumFit& f = r.fits.strata[k];
      os << csv_number(rung.tau) << ',' << s.K << ',' << csv_number(s.p_hat) << ','
         << csv_number(s.se) << ',' << csv_number(rung.E_hat) << ',' << csv_number(s.scaled_prob)
         << ',' << csv_number(c.A) << ',' << csv_number(r.B) << ',' << csv_number(r.C.value) << ','
         << csv_number(c.D) << ',' << csv_number(c.D_prime) << ',' << csv_number(f.vs_tau.slope)
         << ',' << csv_number(f.vs_E.slope) << ',' << csv_number(f.vs_tau.ci_lo) << ','
         << csv_number(f.vs_tau.ci_hi) << ',' << csv_number(rung.E_se) << ',' << s.count << ','
         << (s.grid ? std::to_string(s.grid->count) : std::string()) << ','
         << (s.grid ? csv_number(s.grid->scaled) : std::string()) << ','
         << csv_number(s.consistency_gap) << ',' << csv_number(s.consistency_allowance) << ','
         << csv_number(f.counting_exponent) << ',' << csv_number(f.law_exponent) << ','
         << csv_number(f.vs_E.ci_lo) << ',' << csv_number(f.vs_E.ci_hi) << "\n";
    }
  }
  return os.str();
}

inline std::string counts_csv(const std::vector<GridCount>& rows, const RunManifest& m) {
  std::ostringstream os;
  os << io::manifest_line(m) << "\n";
  os << "K,tau,count,scaled,count_lo,count_hi,degenerate_count\n";
  for (const auto& g : rows)
    os << g.K << ',' << io::csv_number(g.tau) << ',' << g.count << ',' << io::csv_number(g.scaled)
       << ',' << g.count_lo << ',' << g.count_hi << ',' << g.degenerate_count << "\n";
  return os.str();
}

inline std::vector<GridCount> report_grid_counts(const ScalingReport& r) {
  std::vector<GridCount> rows;
  for (const auto& rung : r.rungs)
    for (const auto& s : rung.strata)
      if (s.grid) rows.push_back(*s.grid);
  return rows;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::config, "cannot write " + path.string());
  out << text;
}

}  // namespace quantlab

#endif  // QUANTLAB_IO_HPP_
