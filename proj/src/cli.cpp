#include "interplab/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "interplab/applications.hpp"
#include "interplab/banach.hpp"
#include "interplab/errors.hpp"
#include "interplab/mean.hpp"
#include "interplab/operator_family.hpp"
#include "interplab/rademacher.hpp"
#include "interplab/report.hpp"
#include "interplab/sectorial.hpp"
#include "interplab/stein.hpp"
#include "interplab/strip.hpp"

namespace interplab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// schema violations carry the offending field path in the message
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) fail(path, "must be an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

bool has(const json& obj, const char* key) { return obj.is_object() && obj.contains(key); }

// numbers; the string "inf" denotes the extended exponent
double as_number(const json& v, const std::string& path) {
  if (v.is_string() && v.get<std::string>() == "inf") return kInf;
  if (!v.is_number()) fail(path, "must be a number (or \"inf\")");
  return v.get<double>();
}

double num_field(const json& obj, const std::string& path, const char* key, double lo, double hi,
                 bool open_lo = false, bool open_hi = false) {
  const std::string p = path + "." + key;
  const double v = as_number(member(obj, path, key), p);
  if (std::isnan(v) || v < lo || v > hi || (open_lo && v <= lo) || (open_hi && v >= hi))
    fail(p, "out of range " + std::string(open_lo ? "(" : "[") + format_double(lo) + ", " +
                format_double(hi) + (open_hi ? ")" : "]"));
  return v;
}

double num_or(const json& obj, const std::string& path, const char* key, double lo, double hi,
              double fallback, bool open_lo = false, bool open_hi = false) {
  if (!has(obj, key)) return fallback;
  return num_field(obj, path, key, lo, hi, open_lo, open_hi);
}

long long int_field(const json& obj, const std::string& path, const char* key, long long lo,
                    long long hi) {
  const std::string p = path + "." + key;
  const json& v = member(obj, path, key);
  if (!v.is_number_integer()) fail(p, "must be an integer");
  const long long n = v.get<long long>();
  if (n < lo || n > hi)
    fail(p, "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return n;
}

long long int_or(const json& obj, const std::string& path, const char* key, long long lo,
                 long long hi, long long fallback) {
  if (!has(obj, key)) return fallback;
  return int_field(obj, path, key, lo, hi);
}

Eigen::VectorXd as_weights(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "must be a nonempty array of positive numbers");
  Eigen::VectorXd w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    w[i] = as_number(v[i], p);
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) fail(p, "must be a positive finite number");
  }
  return w;
}

std::complex<double> as_complex(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "must be a [re, im] pair");
  const double re = as_number(v[0], path + "[0]");
  const double im = as_number(v[1], path + "[1]");
  if (!std::isfinite(re) || !std::isfinite(im)) fail(path, "entries must be finite");
  return {re, im};
}

Eigen::VectorXcd as_cvector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "must be a nonempty array of [re, im] pairs");
  Eigen::VectorXcd x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    x[i] = as_complex(v[i], path + "[" + std::to_string(i) + "]");
  return x;
}

Eigen::MatrixXcd as_cmatrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "must be a nonempty array of rows");
  const std::size_t n = v.size();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != n) fail(rp, "matrix must be square");
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = as_complex(v[i][j], rp + "[" + std::to_string(j) + "]");
  }
  return m;
}

WeightedLrSpace as_space(const json& v, const std::string& path) {
  const double r = num_field(v, path, "r", 1.0, kInf);
  const Eigen::VectorXd w = as_weights(member(v, path, "weights"), path + ".weights");
  return WeightedLrSpace::weighted_lr(r, w);
}

BanachCouple as_couple(const json& v, const std::string& path) {
  const double r0 = num_field(v, path, "r0", 1.0, kInf);
  const double r1 = num_field(v, path, "r1", 1.0, kInf);
  const Eigen::VectorXd w0 = as_weights(member(v, path, "w0"), path + ".w0");
  const Eigen::VectorXd w1 = as_weights(member(v, path, "w1"), path + ".w1");
  if (w0.size() != w1.size()) fail(path + ".w1", "must match the length of w0");
  return {WeightedLrSpace::weighted_lr(r0, w0), WeightedLrSpace::weighted_lr(r1, w1)};
}

InterpParams as_params(const json& v, const std::string& path) {
  InterpParams params;
  params.theta = num_field(v, path, "theta", 0.0, 1.0, true, true);
  params.p0 = num_field(v, path, "p0", 1.0, kInf);
  params.p1 = num_field(v, path, "p1", 1.0, kInf);
  params.q0 = num_or(v, path, "q0", 0.0, kInf, 0.0);
  params.q1 = num_or(v, path, "q1", 0.0, kInf, 0.0);
  if (params.q0 != 0.0 && params.q0 < 1.0) fail(path + ".q0", "must be 0 (default) or >= 1");
  if (params.q1 != 0.0 && params.q1 < 1.0) fail(path + ".q1", "must be 0 (default) or >= 1");
  return params;
}

QuadOptions as_quad(const json& cfg) {
  QuadOptions quad;
  if (!has(cfg, "quad")) return quad;
  const json& v = cfg["quad"];
  quad.du = num_or(v, "quad", "du", 0.0, 1.0, quad.du, true);
  quad.U = num_or(v, "quad", "U", 0.0, 1e4, quad.U);
  quad.tail_tol = num_or(v, "quad", "tail_tol", 0.0, 1.0, quad.tail_tol, true);
  quad.quad_tol = num_or(v, "quad", "quad_tol", 0.0, 1.0, quad.quad_tol, true);
  quad.max_points = static_cast<int>(int_or(v, "quad", "max_points", 100, 10000000, quad.max_points));
  return quad;
}

KOptions as_solver(const json& cfg) {
  KOptions opts;
  if (!has(cfg, "solver")) return opts;
  const json& v = cfg["solver"];
  opts.tol = num_or(v, "solver", "tol", 0.0, 1.0, opts.tol, true);
  opts.max_iters = static_cast<int>(int_or(v, "solver", "max_iters", 1, 1000000, opts.max_iters));
  return opts;
}

MeanMinimizeOptions as_minimize(const json& cfg) {
  MeanMinimizeOptions opts;
  if (!has(cfg, "minimize")) return opts;
  const json& v = cfg["minimize"];
  opts.max_iters = static_cast<int>(int_or(v, "minimize", "max_iters", 1, 10000000, opts.max_iters));
  opts.cap_ratio = num_or(v, "minimize", "cap_ratio", 1.0, 1e12, opts.cap_ratio);
  opts.stall_iters =
      static_cast<int>(int_or(v, "minimize", "stall_iters", 1, 10000000, opts.stall_iters));
  return opts;
}

// working grid: {"h": step, "L": half-width} (L optional; defaults to the
// theta-adapted width)
GridFunction as_grid(const json& cfg, const InterpParams& params, int n) {
  if (!has(cfg, "grid")) return default_mean_grid(params, n);
  const json& v = cfg["grid"];
  const double h = num_or(v, "grid", "h", 0.0, 10.0, 0.1, true);
  if (!has(v, "L")) return default_mean_grid(params, n, h);
  const double L = num_field(v, "grid", "L", h, 1e4);
  const int m = static_cast<int>(std::lround(2.0 * L / h));
  if (m < 4) fail("grid.L", "window too small for the requested step");
  return GridFunction::symmetric(L, m, n);
}

struct Artifact {
  fs::path path;
  std::string bytes;
};

struct RunContext {
  json cfg;
  std::uint64_t seed = 0;
  fs::path out_dir;
  fs::path report_path;
  fs::path table_path;
  Report rep;
  std::vector<Artifact> artifacts;

  void add_table(const fs::path& p, std::string bytes) {
    artifacts.push_back({out_dir / p, std::move(bytes)});
  }
  // table path with a suffix before the extension (multi-table commands)
  fs::path table_variant(int k) const {
    fs::path p = table_path;
    const std::string stem = p.stem().string();
    const std::string ext = p.extension().string();
    p.replace_filename(stem + "_" + std::to_string(k) + ext);
    return p;
  }
};

int cmd_kfunc(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const BanachCouple couple = as_couple(member(cfg, "config", "couple"), "couple");
  const Eigen::VectorXcd x = as_cvector(member(cfg, "config", "x"), "x");
  if (x.size() != couple.X0.dim()) fail("x", "length must match the couple dimension");
  const KOptions solver = as_solver(cfg);

  double t_min = 1e-3, t_max = 1e3;
  long long points = 61;
  if (has(cfg, "tgrid")) {
    const json& tg = cfg["tgrid"];
    t_min = num_or(tg, "tgrid", "t_min", 0.0, 1e12, t_min, true);
    t_max = num_or(tg, "tgrid", "t_max", t_min, 1e15, t_max, true);
    points = int_or(tg, "tgrid", "points", 2, 100000, points);
  }

  std::vector<ScanRow> rows;
  rows.reserve(points);
  for (long long i = 0; i < points; ++i) {
    const double t =
        t_min * std::pow(t_max / t_min, static_cast<double>(i) / static_cast<double>(points - 1));
    rows.push_back({t, 0.0, k_functional(couple, x, t, solver).value});
  }
  ctx.add_table(ctx.table_path, scan_table_csv(rows));
  ctx.rep.put("points", points);
  ctx.rep.put("value_at_t1", k_functional(couple, x, 1.0, solver).value);
  return 0;
}

int cmd_interp_norm(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const BanachCouple couple = as_couple(member(cfg, "config", "couple"), "couple");
  const InterpParams params = as_params(member(cfg, "config", "params"), "params");
  const Eigen::VectorXcd x = as_cvector(member(cfg, "config", "x"), "x");
  if (x.size() != couple.X0.dim()) fail("x", "length must match the couple dimension");
  ctx.rep.put("value", real_interp_norm(couple, params, x, as_quad(cfg)));
  return 0;
}

int cmd_mean_min(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const BanachCouple couple = as_couple(member(cfg, "config", "couple"), "couple");
  const InterpParams params = as_params(member(cfg, "config", "params"), "params");
  const Eigen::VectorXcd x = as_cvector(member(cfg, "config", "x"), "x");
  if (x.size() != couple.X0.dim()) fail("x", "length must match the couple dimension");
  const GridFunction grid = as_grid(cfg, params, couple.X0.dim());

  const MeanMinimizeResult res = minimize_mean_norm(couple, params, x, grid, as_minimize(cfg));
  ctx.rep.put("value", res.value);
  ctx.rep.put("residual", res.rep.residual);
  ctx.rep.put("hit_iteration_cap", res.hit_iteration_cap);

  std::ostringstream csv;
  csv << "t";
  for (int c = 0; c < res.rep.gf.n(); ++c) csv << ",re" << c << ",im" << c;
  csv << "\n";
  for (int k = 0; k < res.rep.gf.m(); ++k) {
    csv << format_double(res.rep.gf.t(k));
    for (int c = 0; c < res.rep.gf.n(); ++c)
      csv << "," << format_double(res.rep.gf.values(k, c).real()) << ","
          << format_double(res.rep.gf.values(k, c).imag());
    csv << "\n";
  }
  ctx.add_table(ctx.table_path, csv.str());
  return 0;
}

int cmd_complex_check(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const BanachCouple couple = as_couple(member(cfg, "config", "couple"), "couple");
  const InterpParams params = as_params(member(cfg, "config", "params"), "params");
  const Eigen::VectorXcd x = as_cvector(member(cfg, "config", "x"), "x");
  if (x.size() != couple.X0.dim()) fail("x", "length must match the couple dimension");
  const GridFunction grid = as_grid(cfg, params, couple.X0.dim());

  const double upper = complex_norm_upper(couple, params, x, grid, as_minimize(cfg));
  const double real_norm = real_interp_norm(couple, params, x, as_quad(cfg));
  const double ratio = upper / real_norm;
  ctx.rep.put("upper", upper);
  ctx.rep.put("real_norm", real_norm);
  ctx.rep.put("ratio", ratio);
  const bool ok = std::isfinite(ratio) && ratio > 0.0;
  ctx.rep.put("pass", ok);
  return ok ? 0 : 1;
}

int cmd_stein_check(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const json& fam_cfg = member(cfg, "config", "family");
  const Eigen::VectorXd fw0 = as_weights(member(fam_cfg, "family", "w0"), "family.w0");
  const Eigen::VectorXd fw1 = as_weights(member(fam_cfg, "family", "w1"), "family.w1");
  if (fw0.size() != fw1.size()) fail("family.w1", "must match the length of family.w0");
  const OperatorFamily fam = OperatorFamily::weighted(fw0, fw1);

  const BanachCouple coupleX = as_couple(member(cfg, "config", "coupleX"), "coupleX");
  const BanachCouple coupleY = as_couple(member(cfg, "config", "coupleY"), "coupleY");
  const InterpParams params = as_params(member(cfg, "config", "params"), "params");
  if (coupleX.X0.dim() != fw0.size()) fail("coupleX", "dimension must match the family");

  SteinOptions opts;
  opts.samples = static_cast<int>(int_or(cfg, "config", "samples", 1, 100000, opts.samples));
  opts.suite_constant =
      num_or(cfg, "config", "suite_constant", 0.0, 1e6, opts.suite_constant, true);
  opts.seed = ctx.seed;
  opts.minimize_iters =
      static_cast<int>(int_or(cfg, "config", "minimize_iters", 1, 10000000, opts.minimize_iters));
  if (has(cfg, "grid")) opts.grid = as_grid(cfg, params, coupleX.X0.dim());

  const SteinReport sr = stein_check(fam, coupleX, coupleY, params, opts);
  ctx.rep.put("c_empirical", sr.c_empirical);
  ctx.rep.put("m0_lower", sr.m0_lower);
  ctx.rep.put("m0_upper", sr.m0_upper);
  ctx.rep.put("m1_lower", sr.m1_lower);
  ctx.rep.put("m1_upper", sr.m1_upper);
  ctx.rep.put("samples", sr.samples);
  ctx.rep.put("suite_constant", opts.suite_constant);
  ctx.rep.put("violations", sr.violations);
  return sr.violations == 0 ? 0 : 1;
}

int cmd_weighted_demo(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const long long n = int_field(cfg, "config", "n", 1, 64);
  const double p0 = num_field(cfg, "config", "p0", 1.0, kInf);
  const double p1 = num_field(cfg, "config", "p1", 1.0, kInf);
  const Eigen::VectorXd w0 = as_weights(member(cfg, "config", "w0"), "w0");
  const Eigen::VectorXd w1 = as_weights(member(cfg, "config", "w1"), "w1");
  if (w0.size() != n) fail("w0", "length must equal n");
  if (w1.size() != n) fail("w1", "length must equal n");
  const double theta = num_field(cfg, "config", "theta", 0.0, 1.0, true, true);
  const long long samples = int_field(cfg, "config", "samples", 1, 100000);

  WeightedEquivalenceOptions opts;
  opts.constant = num_or(cfg, "config", "constant", 0.0, 1e6, opts.constant, true);
  opts.seed = ctx.seed;
  const WeightedEquivalenceReport r = weighted_equivalence_check(
      static_cast<int>(n), p0, p1, w0, w1, theta, static_cast<int>(samples), opts);
  ctx.rep.put("constant", opts.constant);
  ctx.rep.put("max_ratio", r.max_ratio);
  ctx.rep.put("min_ratio", r.min_ratio);
  ctx.rep.put("pass", r.pass);
  ctx.rep.put("samples", r.samples);
  return r.pass ? 0 : 1;
}

SectorSpec as_sector_spec(const json& cfg) {
  SectorSpec spec;
  if (!has(cfg, "scan")) return spec;
  const json& v = cfg["scan"];
  spec.r_min = num_or(v, "scan", "r_min", 0.0, 1e12, spec.r_min, true);
  spec.r_max = num_or(v, "scan", "r_max", spec.r_min, 1e15, spec.r_max, true);
  spec.per_decade = static_cast<int>(int_or(v, "scan", "per_decade", 2, 1000, spec.per_decade));
  return spec;
}

int cmd_sector_scan(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const MatrixOperator op = MatrixOperator::make(as_cmatrix(member(cfg, "config", "matrix"), "matrix"));
  const WeightedLrSpace space = as_space(member(cfg, "config", "space"), "space");
  if (space.dim() != op.dim()) fail("space.weights", "dimension must match the matrix");
  const SectorSpec spec = as_sector_spec(cfg);
  const int table_points = static_cast<int>(int_or(cfg, "config", "table_points", 2, 1000, 9));

  const SectorialityResult res = sectoriality_angle(op, space, spec, table_points);
  ctx.rep.put("not_sectorial", res.not_sectorial);
  ctx.rep.put("omega", res.omega);
  ctx.rep.put("table_points", table_points);

  std::vector<ScanRow> rows;
  for (std::size_t i = 0; i < res.sigmas.size(); ++i)
    rows.push_back({res.sigmas[i], 0.0, res.sups[i]});
  ctx.add_table(ctx.table_path, scan_table_csv(rows));
  return 0;
}

int cmd_semigroup_scan(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const MatrixOperator op = MatrixOperator::make(as_cmatrix(member(cfg, "config", "matrix"), "matrix"));
  const BanachCouple couple = as_couple(member(cfg, "config", "couple"), "couple");
  const double p0 = num_field(cfg, "config", "p0", 1.0, kInf);
  const double p1 = num_field(cfg, "config", "p1", 1.0, kInf);

  const json& th = member(cfg, "config", "thetas");
  if (!th.is_array() || th.empty()) fail("thetas", "must be a nonempty array");
  std::vector<double> thetas;
  for (std::size_t i = 0; i < th.size(); ++i) {
    const std::string p = "thetas[" + std::to_string(i) + "]";
    const double t = as_number(th[i], p);
    if (!(t > 0.0 && t < 1.0)) fail(p, "must lie in (0, 1)");
    thetas.push_back(t);
  }

  SemigroupScanOptions opts;
  if (has(cfg, "scan")) {
    const json& v = cfg["scan"];
    opts.cap = num_or(v, "scan", "cap", 0.0, 1e12, opts.cap, true);
    opts.margin = num_or(v, "scan", "margin", 0.0, 1.0, opts.margin, true, true);
    opts.phi_points = static_cast<int>(int_or(v, "scan", "phi_points", 1, 1000, opts.phi_points));
    opts.r_min = num_or(v, "scan", "r_min", 0.0, 1e12, opts.r_min, true);
    opts.r_max = num_or(v, "scan", "r_max", opts.r_min, 1e15, opts.r_max, true);
    opts.per_decade = static_cast<int>(int_or(v, "scan", "per_decade", 1, 1000, opts.per_decade));
  }
  opts.norms.seed = ctx.seed;

  const SemigroupScanReport res = semigroup_scan(op, couple, thetas, p0, p1, opts);
  ctx.rep.put("boundedness_x1", res.boundedness_x1);
  ctx.rep.put("cap", opts.cap);
  ctx.rep.put("margin", opts.margin);
  ctx.rep.put("sigma", res.sigma);

  bool any_cap = false;
  for (std::size_t k = 0; k < res.rows.size(); ++k) {
    const SemigroupThetaScan& row = res.rows[k];
    const std::string suffix = "_" + std::to_string(k);
    ctx.rep.put("theta" + suffix, row.theta);
    ctx.rep.put("phi_max" + suffix, row.phi_max);
    ctx.rep.put("max_norm" + suffix, row.max_norm);
    ctx.rep.put("hit_cap" + suffix, row.hit_cap);
    any_cap = any_cap || row.hit_cap;

    std::vector<ScanRow> rows;
    for (std::size_t i = 0; i < row.abs_z.size(); ++i)
      rows.push_back({row.abs_z[i], row.arg_z[i], row.lower[i]});
    ctx.add_table(ctx.table_variant(static_cast<int>(k)), scan_table_csv(rows));
  }
  return any_cap ? 1 : 0;
}

int cmd_rademacher(RunContext& ctx) {
  const json& cfg = ctx.cfg;
  const WeightedLrSpace space = as_space(member(cfg, "config", "space"), "space");
  const json& vecs = member(cfg, "config", "vectors");
  if (!vecs.is_array() || vecs.empty()) fail("vectors", "must be a nonempty array");
  std::vector<Eigen::VectorXcd> xs;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const std::string p = "vectors[" + std::to_string(i) + "]";
    Eigen::VectorXcd x = as_cvector(vecs[i], p);
    if (x.size() != space.dim()) fail(p, "length must match the space dimension");
    xs.push_back(std::move(x));
  }
  ctx.rep.put("average", rademacher_average(space, xs));
  ctx.rep.put("vectors", static_cast<long long>(xs.size()));

  if (has(cfg, "operators")) {
    const json& ops = cfg["operators"];
    if (!ops.is_array() || ops.empty()) fail("operators", "must be a nonempty array");
    std::vector<Eigen::MatrixXcd> Ts;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string p = "operators[" + std::to_string(i) + "]";
      Eigen::MatrixXcd T = as_cmatrix(ops[i], p);
      if (T.rows() != space.dim()) fail(p, "shape must match the space dimension");
      Ts.push_back(std::move(T));
    }
    const long long trials = int_or(cfg, "config", "trials", 0, 100000, 50);
    ctx.rep.put("r_bound", r_bound_lower(Ts, space, static_cast<int>(trials), ctx.seed));
    ctx.rep.put("trials", trials);
  }
  return 0;
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open " + p.string() + " for writing");
  out << bytes;
  out.flush();
  if (!out.good()) throw IoError("short write to " + p.string());
}

}  // namespace

int run_cli(const std::string& command, const std::string& config_path,
            const std::optional<std::uint64_t>& seed_override, const std::string& out_dir) {
  try {
    std::string bytes;
    {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw IoError("cannot read config file " + config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      bytes = ss.str();
    }

    RunContext ctx;
    try {
      ctx.cfg = json::parse(bytes);
    } catch (const json::parse_error& e) {
      fail("<config>", std::string("not valid JSON: ") + e.what());
    }
    if (!ctx.cfg.is_object()) fail("<config>", "top level must be an object");

    const json& cmd_field = member(ctx.cfg, "config", "command");
    if (!cmd_field.is_string()) fail("command", "must be a string");
    if (cmd_field.get<std::string>() != command)
      fail("command", "config declares \"" + cmd_field.get<std::string>() +
                          "\" but the subcommand is \"" + command + "\"");

    static const char* kSampling[] = {"stein-check", "weighted-demo", "semigroup-scan",
                                      "rademacher"};
    bool sampling = false;
    for (const char* s : kSampling) sampling = sampling || command == s;
    if (seed_override.has_value()) {
      ctx.seed = *seed_override;
    } else if (has(ctx.cfg, "seed")) {
      ctx.seed = static_cast<std::uint64_t>(
          int_field(ctx.cfg, "config", "seed", 0, 9007199254740992ll));
    } else if (sampling) {
      fail("seed", "required for sampling commands");
    }

    ctx.out_dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::string report_name = "report.json";
    std::string table_name = "table.csv";
    if (has(ctx.cfg, "outputs")) {
      const json& o = ctx.cfg["outputs"];
      if (has(o, "report")) {
        if (!o["report"].is_string()) fail("outputs.report", "must be a string");
        report_name = o["report"].get<std::string>();
      }
      if (has(o, "table")) {
        if (!o["table"].is_string()) fail("outputs.table", "must be a string");
        table_name = o["table"].get<std::string>();
      }
    }
    ctx.report_path = ctx.out_dir / report_name;
    ctx.table_path = table_name;

    // provenance: hash of the config bytes chained with the effective seed
    const std::string seed_str = std::to_string(ctx.seed);
    const std::uint64_t h = fnv1a64(seed_str.data(), seed_str.size(),
                                    fnv1a64(bytes.data(), bytes.size()));
    ctx.rep.put("command", command);
    ctx.rep.put("config_hash", hash_hex(h));
    ctx.rep.put("schema_version", 1);
    ctx.rep.put("seed", static_cast<long long>(ctx.seed));

    int code;
    if (command == "kfunc")
      code = cmd_kfunc(ctx);
    else if (command == "interp-norm")
      code = cmd_interp_norm(ctx);
    else if (command == "mean-min")
      code = cmd_mean_min(ctx);
    else if (command == "complex-check")
      code = cmd_complex_check(ctx);
    else if (command == "stein-check")
      code = cmd_stein_check(ctx);
    else if (command == "weighted-demo")
      code = cmd_weighted_demo(ctx);
    else if (command == "sector-scan")
      code = cmd_sector_scan(ctx);
    else if (command == "semigroup-scan")
      code = cmd_semigroup_scan(ctx);
    else if (command == "rademacher")
      code = cmd_rademacher(ctx);
    else
      fail("command", "unknown subcommand \"" + command + "\"");

    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + ctx.out_dir.string());
    write_file(ctx.report_path, ctx.rep.to_json());
    for (const Artifact& a : ctx.artifacts) write_file(a.path, a.bytes);
    return code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}

}  // namespace interplab
