#include "frlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace frlab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::uint64_t fnv_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Collects artifacts and writes the closing manifest.
class ArtifactWriter {
 public:
  ArtifactWriter(std::string dir, std::string config_digest)
      : dir_(std::move(dir)), config_digest_(std::move(config_digest)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = fs::path(dir_) / name;
    std::ofstream out(p);
    out << content;
    out.close();
    std::ostringstream dg;
    dg << std::hex << fnv_bytes(content);
    json entry;
    entry["path"] = name;
    entry["digest"] = dg.str();
    entries_.push_back(entry);
  }

  void write_report(const InequalityReport& rep, const std::string& stem) {
    write(stem + ".json", rep.to_json());
  }

  void finalize(const json& extra) {
    json m;
    m["config_digest"] = config_digest_;
    m["artifacts"] = entries_;
    m["float_env"] = "IEEE-754 binary64, FFTW double precision";
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = *it;
    write("manifest.json", m.dump(2));
  }

 private:
  std::string dir_;
  std::string config_digest_;
  std::vector<json> entries_;
};

struct ParsedConfig {
  std::string experiment;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  int mc_paths = 100;
  int refinement_levels = 1;
  SolverConfig solver;
  std::string a_kind = "one";  // one | sin | random

  int u0_mode = 1;
  double u0_amp = 1.0;
  double f_amp = 0.0;
  double h_amp = 0.1;
  double g_amp = 0.0;

  bool has_jumps = false;
  LevyMeasureSpec jump_spec;

  double coeff_scale = 0.2;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;

  WhiteNoiseConfig wn;
  std::string digest;
};

double get_or(const json& j, const std::string& key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot read " + path);
  json j;
  in >> j;

  ParsedConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  const auto known = experiment_names();
  if (std::find(known.begin(), known.end(), c.experiment) == known.end())
    throw std::invalid_argument("config: unknown experiment " + c.experiment);
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  c.seed = static_cast<std::uint64_t>(get_or(j, "seed", 1));
  c.mc_paths = static_cast<int>(get_or(j, "mc_paths", 100));
  c.refinement_levels = static_cast<int>(get_or(j, "refinement_levels", 1));

  const json s = j.value("solver", json::object());
  c.solver.alpha = get_or(s, "alpha", 1.5);
  c.solver.gamma = get_or(s, "gamma", 0.0);
  c.solver.p = get_or(s, "p", 2.0);
  c.solver.T = get_or(s, "T", 1.0);
  c.solver.dt = get_or(s, "dt", 1e-2);
  c.solver.K = static_cast<int>(get_or(s, "K", 1));
  c.solver.m = static_cast<int>(get_or(s, "m", 1));
  c.solver.eps1 = get_or(s, "eps1", 0.0);
  c.solver.delta = get_or(s, "delta", 0.1);
  c.solver.seed = c.seed;
  const int n = static_cast<int>(get_or(s, "grid_n", 64));
  const int dim = static_cast<int>(get_or(s, "grid_dim", 1));
  const double length = get_or(s, "length", 2.0 * M_PI);
  c.solver.grid = Grid(dim, n, length);
  if (s.contains("a_kind")) c.a_kind = s["a_kind"].get<std::string>();

  const json d = j.value("data", json::object());
  c.u0_mode = static_cast<int>(get_or(d, "u0_mode", 1));
  c.u0_amp = get_or(d, "u0_amp", 1.0);
  c.f_amp = get_or(d, "f_amp", 0.0);
  c.h_amp = get_or(d, "h_amp", 0.1);
  c.g_amp = get_or(d, "g_amp", 0.0);

  if (j.contains("jumps")) {
    const json jm = j["jumps"];
    c.has_jumps = true;
    if (jm.contains("c")) {
      c.jump_spec = LevyMeasureSpec::radial_tail(
          jm.at("c").get<double>(), jm.at("alpha_tail").get<double>(),
          get_or(jm, "eps", 0.05), get_or(jm, "R", 2.0),
          static_cast<int>(get_or(jm, "n_bins", 8)));
    } else {
      const double z = get_or(jm, "mark", 0.5);
      const double rate = get_or(jm, "rate", 1.0);
      c.jump_spec = LevyMeasureSpec(1, {{{z}, rate}, {{-z}, rate}});
    }
  }

  const json co = j.value("coefficients", json::object());
  c.coeff_scale = get_or(co, "scale", 0.2);
  c.beta1 = get_or(co, "beta1", 0.0);
  c.beta2 = get_or(co, "beta2", 0.0);
  c.beta3 = get_or(co, "beta3", 0.0);

  const json w = j.value("whitenoise", json::object());
  c.wn.gamma = get_or(w, "gamma", -0.6);
  c.wn.alpha = get_or(w, "alpha", 1.0);
  c.wn.p = get_or(w, "p", 2.0);
  c.wn.r = get_or(w, "r", 1.0);
  if (w.contains("s") && w["s"].is_string())
    c.wn.s = std::numeric_limits<double>::infinity();
  else
    c.wn.s = get_or(w, "s", std::numeric_limits<double>::infinity());
  c.wn.K_basis = static_cast<int>(get_or(w, "K_basis", 16));
  c.wn.grid = c.solver.grid.dim == 1 ? c.solver.grid : Grid(1, n, length);

  c.digest = ConfigDigest().add(j.dump()).hex();
  return c;
}

Field mode_field(const Grid& g, int mode, double amp) {
  Field out(g);
  const double w = mode * g.freq_unit();
  const int n = g.modes_per_axis;
  for (std::size_t j = 0; j < out.values.size(); ++j) {
    const double x = g.node(static_cast<int>(j) % n);  // last axis
    out.values[j] = amp * std::cos(w * x);
  }
  return out;
}

std::function<double(double)> make_a(const ParsedConfig& c) {
  if (c.a_kind == "sin") return [](double t) { return 1.0 + 0.5 * std::sin(t); };
  if (c.a_kind == "random")
    return sample_diffusivity(c.solver.delta, c.solver.T, c.solver.dt, c.seed,
                              7001);
  return nullptr;
}

std::string solution_csv(const SolutionPath& sp) {
  std::ostringstream os;
  os.precision(17);
  os << "t,norm_gamma,norm_gamma_alpha\n";
  for (std::size_t i = 0; i < sp.times.size(); ++i)
    os << sp.times[i] << ','
       << (i < sp.norm_gamma.size() ? sp.norm_gamma[i] : 0.0) << ','
       << (i < sp.norm_gamma_alpha.size() ? sp.norm_gamma_alpha[i] : 0.0)
       << '\n';
  return os.str();
}

std::string field_csv(const Field& f) {
  std::ostringstream os;
  os.precision(17);
  os << "x,u\n";
  for (std::size_t j = 0; j < f.values.size(); ++j)
    os << f.grid.node(static_cast<int>(j) % f.grid.modes_per_axis) << ','
       << f.values[j] << '\n';
  return os.str();
}

std::string driver_csv(const DriverPath& p) {
  std::ostringstream os;
  os.precision(17);
  os << "kind,time,value\n";
  for (int s = 0; s < p.steps(); ++s)
    os << "wiener," << s * p.dt << ',' << p.wiener_increments[s][0] << '\n';
  for (const auto& ev : p.jump_events)
    os << "jump," << ev.time << ',' << ev.mark[0] << '\n';
  return os.str();
}

// Internal outcome of a single run at one refinement level.
struct ExpOutcome {
  int exit_code = 0;
  std::string message;
  double tracked = 0.0;  // ratio or error series value for sweeps
  std::vector<InequalityReport> reports;
};

ExpOutcome run_deterministic(const ParsedConfig& c, ArtifactWriter& w) {
  ExpOutcome out;
  SolverConfig cfg = c.solver;
  cfg.a = make_a(c);
  const Field u0 = mode_field(cfg.grid, c.u0_mode, c.u0_amp);
  TimeField f;
  if (c.f_amp != 0.0) {
    const Field fv = mode_field(cfg.grid, c.u0_mode, c.f_amp);
    f = [fv](double) { return fv; };
  }
  const SolutionPath sp = solve_deterministic(u0, f, cfg);
  w.write("solution.csv", solution_csv(sp));
  w.write("final_state.csv", field_csv(sp.final_state()));

  json rep;
  rep["experiment"] = "deterministic";
  if (c.a_kind == "one" && c.f_amp == 0.0) {
    // Eigenfunction identity: a single mode decays by the exact factor.
    const Field exact =
        semigroup_apply(u0, cfg.T, 1.0, cfg.alpha);
    double err = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < exact.values.size(); ++j) {
      err = std::max(err,
                     std::abs(sp.final_state().values[j] - exact.values[j]));
      ref = std::max(ref, std::abs(exact.values[j]));
    }
    const double rel = ref > 0.0 ? err / ref : err;
    rep["eigenfunction_rel_error"] = rel;
    out.tracked = rel;
    if (rel > 1e-12) {
      out.exit_code = 1;
      out.message = "eigenfunction identity violated";
    }
  } else if (c.a_kind == "sin" && c.f_amp == 0.0) {
    // Time change: variable a(t) run versus the constant-coefficient
    // semigroup evaluated at int_0^T a(s) ds.
    const double I = cfg.T + 0.5 * (1.0 - std::cos(cfg.T));
    const Field exact = semigroup_apply(u0, I, 1.0, cfg.alpha);
    const Field diff = sp.final_state() - exact;
    const double rel = lp_norm(diff, 2.0) / std::max(lp_norm(exact, 2.0), 1e-300);
    rep["time_change_error"] = rel;
    out.tracked = rel;
  }
  w.write("report.json", rep.dump(2));
  return out;
}

LinearData make_linear_data(const ParsedConfig& c, const SolverConfig& cfg,
                            bool jumps) {
  LinearData data;
  data.u0 = c.u0_amp * random_band_limited(cfg.grid, c.seed + 11);
  if (c.f_amp != 0.0) {
    const Field fv = c.f_amp * random_band_limited(cfg.grid, c.seed + 12);
    data.f = [fv](double) { return fv; };
  }
  if (!jumps && c.h_amp != 0.0) {
    FieldStack hs(cfg.grid, cfg.K);
    for (int k = 0; k < cfg.K; ++k)
      hs.components[k] =
          c.h_amp * random_band_limited(cfg.grid, c.seed + 20 + k);
    data.h = [hs](double) { return hs; };
  }
  if (jumps && c.g_amp != 0.0) {
    FieldStack gs(cfg.grid, cfg.K);
    for (int k = 0; k < cfg.K; ++k)
      gs.components[k] =
          c.g_amp * random_band_limited(cfg.grid, c.seed + 40 + k);
    data.g.push_back([gs](double) { return gs; });
  }
  return data;
}

ExpOutcome run_linear(const ParsedConfig& c, ArtifactWriter& w, bool jumps) {
  ExpOutcome out;
  SolverConfig cfg = c.solver;
  if (c.a_kind != "one") cfg.a = make_a(c);
  if (jumps && !c.has_jumps)
    throw std::invalid_argument("config: linear_levy requires a jumps block");
  const LinearData data = make_linear_data(c, cfg, jumps);
  const LevyTriplet wiener = LevyTriplet::wiener(1);
  LevyTriplet jump;
  if (jumps) jump = LevyTriplet::pure_jump(c.jump_spec);

  InequalityReport lin =
      check_linear_estimate(data, wiener, jump, cfg, c.mc_paths);
  InequalityReport sup = check_sup_estimate(data, wiener, jump, cfg, c.mc_paths);
  w.write_report(lin, "linear_estimate");
  w.write_report(sup, "sup_estimate");
  // One sampled driver path for inspection.
  const DriverSet set = sample_driver_set(cfg, wiener, jump, 0);
  if (!set.wiener.empty()) w.write("driver0.csv", driver_csv(set.wiener[0]));
  if (!set.jumps.empty()) w.write("driver0_jump.csv", driver_csv(set.jumps[0].path));
  out.reports = {lin, sup};
  out.tracked = lin.ratio;
  for (const auto& r : out.reports)
    if (!r.pass || !std::isfinite(r.ratio)) out.exit_code = 1;
  return out;
}

CoefficientSet make_coefficients(const ParsedConfig& c, const SolverConfig& cfg,
                                 bool jumps) {
  CoefficientSet coeffs;
  coeffs.delta = cfg.delta;
  coeffs.beta1 = c.beta1;
  coeffs.beta2 = c.beta2;
  const double s = c.coeff_scale;
  Field ones(cfg.grid);
  for (double& v : ones.values) v = s;
  coeffs.b = ones;
  coeffs.dcoef = ones;
  FieldStack stack(cfg.grid, cfg.K);
  for (auto& comp : stack.components) comp = ones;
  coeffs.eta = stack;
  coeffs.l = stack;
  if (jumps) {
    coeffs.sigma.push_back(stack);
    coeffs.nu.push_back(stack);
    coeffs.beta3 = {c.beta3};
  }
  if (c.f_amp != 0.0) {
    const Field fv = mode_field(cfg.grid, 1, c.f_amp);
    coeffs.f0 = [fv](double) { return fv; };
  }
  if (c.h_amp != 0.0) {
    FieldStack hs(cfg.grid, cfg.K);
    for (int k = 0; k < cfg.K; ++k)
      hs.components[k] =
          c.h_amp * random_band_limited(cfg.grid, c.seed + 60 + k);
    coeffs.h0 = [hs](double) { return hs; };
  }
  return coeffs;
}

double fit_contraction_ratio(const std::vector<double>& diffs) {
  // Geometric mean of successive quotients, ignoring converged zeros.
  double acc = 0.0;
  int count = 0;
  for (std::size_t i = 1; i < diffs.size(); ++i) {
    if (diffs[i - 1] > 0.0 && diffs[i] > 0.0) {
      acc += std::log(diffs[i] / diffs[i - 1]);
      ++count;
    }
  }
  return count > 0 ? std::exp(acc / count) : 0.0;
}

ExpOutcome run_picard(const ParsedConfig& c, ArtifactWriter& w) {
  ExpOutcome out;
  SolverConfig cfg = c.solver;
  if (c.a_kind != "one") cfg.a = make_a(c);
  const bool jumps = c.has_jumps;
  const CoefficientSet coeffs = make_coefficients(c, cfg, jumps);
  const Field u0 = c.u0_amp * random_band_limited(cfg.grid, c.seed + 1);
  const LevyTriplet wiener = LevyTriplet::wiener(1);
  LevyTriplet jump;
  if (jumps) jump = LevyTriplet::pure_jump(c.jump_spec);
  std::vector<DriverSet> drivers;
  for (int i = 0; i < c.mc_paths; ++i)
    drivers.push_back(sample_driver_set(cfg, wiener, jump, i));

  try {
    const PicardResult res = picard_solve(u0, coeffs, drivers, cfg);
    std::ostringstream os;
    os.precision(17);
    os << "iteration,diff_norm\n";
    for (std::size_t i = 0; i < res.diff_history.size(); ++i)
      os << i + 1 << ',' << res.diff_history[i] << '\n';
    w.write("picard_history.csv", os.str());
    const double ratio = fit_contraction_ratio(res.diff_history);
    json rep;
    rep["iterations"] = res.iterations;
    rep["subintervals"] = res.subintervals;
    rep["fitted_ratio"] = ratio;
    rep["diff_history"] = res.diff_history;
    w.write("report.json", rep.dump(2));
    out.tracked = ratio;
  } catch (const PicardDivergence& e) {
    std::ostringstream os;
    os << e.what() << "; ratio history:";
    for (double d : e.ratio_history) os << ' ' << d;
    out.exit_code = 3;
    out.message = os.str();
  }
  return out;
}

ExpOutcome run_whitenoise(const ParsedConfig& c, ArtifactWriter& w) {
  ExpOutcome out;
  WhiteNoiseConfig wn = c.wn;

  const Grid& grid = wn.grid;
  const Field h0 = random_band_limited(grid, c.seed + 3);
  Field xi0(grid);
  for (std::size_t j = 0; j < xi0.values.size(); ++j)
    xi0.values[j] =
        1.0 + 0.3 * std::cos(grid.node(static_cast<int>(j)) * grid.freq_unit());

  const ExponentCheck ec = validate_exponents(wn);
  const InequalityReport rep = check_lemma_l_last1(h0, xi0, wn);
  w.write_report(rep, "lemma_l_last1");

  const KernelTable& table = kernel_table(grid, wn.gamma, wn.alpha);
  std::ostringstream os;
  os.precision(17);
  os << "x,kernel\n";
  for (int j = 0; j < grid.modes_per_axis; ++j)
    os << j * grid.spacing() << ',' << table.values[j] << '\n';
  w.write("kernel.csv", os.str());

  WhiteNoiseProblem prob;
  prob.u0 = c.u0_amp * random_band_limited(grid, c.seed + 5);
  prob.h_aff = c.h_amp * random_band_limited(grid, c.seed + 6);
  prob.xi = xi0;
  SolverConfig cfg = c.solver;
  const PicardResult res = solve_white_noise(prob, wn, cfg, 1);
  w.write("solution.csv", solution_csv(res.paths[0]));

  json extra;
  extra["exponents_valid"] = ec.valid;
  extra["exponents_message"] = ec.message;
  extra["kernel_c_fit"] = table.c_fit;
  extra["kernel_fit_residual"] = table.fit_residual;
  w.write("whitenoise_report.json", extra.dump(2));

  out.reports = {rep};
  out.tracked = std::abs(rep.ratio - 1.0);
  if (!rep.pass) out.exit_code = 1;
  return out;
}

ExpOutcome run_verify_suite(const ParsedConfig& c, ArtifactWriter& w) {
  ExpOutcome out;
  SolverConfig cfg = c.solver;
  const Grid& grid = cfg.grid;
  std::vector<InequalityReport> reports;

  {
    FieldStack gs(grid, cfg.K);
    for (int k = 0; k < cfg.K; ++k)
      gs.components[k] = random_band_limited(grid, c.seed + 100 + k);
    TimeStack g = [gs](double) { return gs; };
    reports.push_back(
        check_littlewood_paley(g, cfg.alpha, cfg.p, cfg.T, grid, cfg.dt));
  }
  {
    const LevyMeasureSpec spec =
        c.has_jumps ? c.jump_spec
                    : LevyMeasureSpec(1, {{{1.0}, 1.0}, {{-1.0}, 1.0}});
    const int nt = cfg.steps();
    std::vector<std::vector<double>> g(cfg.K, std::vector<double>(nt, 1.0));
    reports.push_back(check_kunita(g, spec, std::max(cfg.p, 2.0), cfg.T,
                                   cfg.dt, c.mc_paths, c.seed));
  }
  {
    const LinearData data = make_linear_data(c, cfg, false);
    const LevyTriplet wiener = LevyTriplet::wiener(1);
    reports.push_back(
        check_linear_estimate(data, wiener, LevyTriplet{}, cfg, c.mc_paths));
    reports.push_back(
        check_sup_estimate(data, wiener, LevyTriplet{}, cfg, c.mc_paths));
  }
  {
    const Field u = random_band_limited(grid, c.seed + 200);
    reports.push_back(
        check_interpolation(u, cfg.gamma, cfg.alpha, cfg.alpha / 2.0, cfg.p));
  }
  {
    const Field fv = random_band_limited(grid, c.seed + 201);
    TimeField f = [fv](double) { return fv; };
    reports.push_back(check_lemma32(f, 1.0, 4.0, 0.35, cfg.T, grid, cfg.dt));
    reports.push_back(check_lemma32(f, 1.0, 4.0, 0.10, cfg.T, grid, cfg.dt));
  }
  for (int i = 1; i <= 4; ++i)
    reports.push_back(check_multiplier_bounds(i, 1.0, cfg.p, grid, 8, c.seed));
  {
    Field a(grid);
    for (std::size_t j = 0; j < a.values.size(); ++j)
      a.values[j] =
          0.5 + 0.4 * std::cos(grid.node(static_cast<int>(j) %
                                         grid.modes_per_axis) *
                               grid.freq_unit());
    const Field h = random_band_limited(grid, c.seed + 202);
    reports.push_back(check_pointwise_multiplier(a, h, cfg.p));
  }

  std::ostringstream csv;
  csv << report_csv_header() << '\n';
  int idx = 0;
  for (const auto& rep : reports) {
    std::ostringstream stem;
    stem << "report_" << idx++ << '_' << rep.name;
    w.write_report(rep, stem.str());
    csv << report_csv_row(rep, 0) << '\n';
    if (!rep.pass || !std::isfinite(rep.ratio)) out.exit_code = 1;
  }
  w.write("suite.csv", csv.str());
  out.reports = reports;
  out.tracked = reports.front().ratio;
  return out;
}

ExpOutcome dispatch(const ParsedConfig& c, ArtifactWriter& w) {
  if (c.experiment == "deterministic") return run_deterministic(c, w);
  if (c.experiment == "linear_wiener") return run_linear(c, w, false);
  if (c.experiment == "linear_levy") return run_linear(c, w, true);
  if (c.experiment == "nonlinear_picard") return run_picard(c, w);
  if (c.experiment == "whitenoise") return run_whitenoise(c, w);
  return run_verify_suite(c, w);
}

void apply_factor(ParsedConfig& c, const std::string& axis, double factor) {
  if (axis == "dt") {
    c.solver.dt *= factor;
  } else if (axis == "grid") {
    c.solver.grid = Grid(c.solver.grid.dim,
                         static_cast<int>(std::llround(
                             c.solver.grid.modes_per_axis * factor)),
                         c.solver.grid.length);
    c.wn.grid = c.solver.grid.dim == 1 ? c.solver.grid : c.wn.grid;
  } else if (axis == "K") {
    c.solver.K = std::max(1, static_cast<int>(std::llround(c.solver.K * factor)));
  } else if (axis == "K_basis") {
    c.wn.K_basis =
        std::max(1, static_cast<int>(std::llround(c.wn.K_basis * factor)));
  } else if (axis == "mc_paths") {
    c.mc_paths =
        std::max(2, static_cast<int>(std::llround(c.mc_paths * factor)));
  } else {
    throw std::invalid_argument("sweep: unknown axis " + axis);
  }
}

}  // namespace

std::vector<std::string> experiment_names() {
  return {"deterministic", "linear_wiener",   "linear_levy",
          "nonlinear_picard", "whitenoise", "verify_suite"};
}

double fitted_log_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

RunResult run_experiment_file(const std::string& config_path) {
  RunResult res;
  try {
    const ParsedConfig c = parse_config(config_path);
    c.solver.validate();
    ArtifactWriter w(c.output_dir, c.digest);
    const ExpOutcome out = dispatch(c, w);
    json extra;
    extra["experiment"] = c.experiment;
    extra["exit_code"] = out.exit_code;
    w.finalize(extra);
    res.exit_code = out.exit_code;
    res.message = out.message.empty()
                      ? (out.exit_code == 0 ? "ok" : "assertion failure")
                      : out.message;
  } catch (const PicardDivergence& e) {
    res.exit_code = 3;
    res.message = e.what();
  } catch (const std::invalid_argument& e) {
    res.exit_code = 2;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.message = e.what();
  }
  return res;
}

RunResult sweep_experiment_file(const std::string& config_path,
                                const std::string& axis,
                                const std::vector<double>& factors) {
  RunResult res;
  try {
    const ParsedConfig base = parse_config(config_path);
    std::vector<double> series, axis_values;
    int worst = 0;
    std::string message;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      ParsedConfig c = base;
      apply_factor(c, axis, factors[i]);
      c.output_dir =
          (fs::path(base.output_dir) / ("level_" + std::to_string(i))).string();
      c.solver.validate();
      ArtifactWriter w(c.output_dir, c.digest);
      const ExpOutcome out = dispatch(c, w);
      json extra;
      extra["experiment"] = c.experiment;
      extra["axis"] = axis;
      extra["factor"] = factors[i];
      w.finalize(extra);
      series.push_back(out.tracked);
      axis_values.push_back(factors[i]);
      if (out.exit_code > worst) {
        worst = out.exit_code;
        message = out.message;
      }
    }
    json rep;
    rep["axis"] = axis;
    rep["factors"] = factors;
    rep["series"] = series;
    rep["fitted_slope"] = fitted_log_slope(axis_values, series);
    fs::create_directories(base.output_dir);
    std::ofstream out_file(fs::path(base.output_dir) / "sweep_report.json");
    out_file << rep.dump(2);
    res.exit_code = worst;
    res.message = worst == 0 ? "ok" : message;
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.message = e.what();
  }
  return res;
}

}  // namespace frlab
