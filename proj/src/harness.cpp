// Copyright 2026 The nsgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nsgp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "nsgp/error_model.hpp"
#include "nsgp/errors.hpp"
#include "nsgp/fourier_grid.hpp"
#include "nsgp/gpr.hpp"
#include "nsgp/matvec.hpp"
#include "nsgp/quadrature.hpp"

namespace nsgp {

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  SplitMix64 g(seed ^ (stream * 0xd1b54a32d192ed03ull));
  return g.next();
}

PointSet gen_dataset(int dim, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("dataset needs N >= 1");
  SplitMix64 g(seed);
  std::vector<double> c(n * static_cast<std::size_t>(dim));
  for (double& v : c) v = 2.0 * g.uniform() - 1.0;
  return PointSet(dim, std::move(c));
}

double sigma_ref(std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= std::cos(std::numbers::pi * v);
  return (p + 2.0) / 6.0;
}

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::matvec: return "matvec";
    case Command::ablate: return "ablate";
    case Command::solve: return "solve";
    case Command::validate: return "validate";
    case Command::phi: return "phi";
  }
  return "?";
}

const char* to_string(KernelKind k) noexcept {
  return k == KernelKind::matern ? "matern" : "sqexp";
}

const char* to_string(FieldChoice f) noexcept {
  switch (f) {
    case FieldChoice::sigma_ref: return "sigma_ref";
    case FieldChoice::constant: return "constant";
    case FieldChoice::csv: return "csv";
  }
  return "?";
}

const char* to_string(AblationAxis a) noexcept {
  switch (a) {
    case AblationAxis::n_t: return "nt";
    case AblationAxis::n_sigma: return "nsigma";
    case AblationAxis::m: return "m";
    case AblationAxis::n: return "n";
  }
  return "?";
}

void RunConfig::validate() const {
  if (dim < 1 || dim > 3) throw InvalidArgument("--dim must be 1, 2 or 3");
  if (n < 1) throw InvalidArgument("--n must be >= 1");
  if (kernel == KernelKind::matern && !(nu > 0.0)) throw InvalidArgument("--nu must be positive");
  if (auto_eps && (n_t || n_sigma || m || delta_omega))
    throw InvalidArgument("--auto-eps cannot be combined with --nt, --nsigma, --m or --domega");
  if (auto_eps && !(*auto_eps > 0.0 && *auto_eps < 1.0))
    throw InvalidArgument("--auto-eps must lie in (0, 1)");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("--eps must lie in (0, 1)");
  if (kernel == KernelKind::sqexp && n_t && *n_t != 0)
    throw InvalidArgument("the squared-exponential kernel uses --nt 0");
  if (kernel == KernelKind::matern && n_t && *n_t < 1)
    throw InvalidArgument("Matern kernels need --nt >= 1");
  if (n_sigma && *n_sigma < 1) throw InvalidArgument("--nsigma must be >= 1");
  if (m && *m < 1) throw InvalidArgument("--m must be >= 1");
  if (delta_omega && !(*delta_omega > 0.0)) throw InvalidArgument("--domega must be positive");
  if (command == Command::solve) {
    if (regime != 1 && regime != 2) throw InvalidArgument("--regime must be 1 or 2");
    if (eta_sq) throw InvalidArgument("the solve regime fixes eta^2; drop --eta-sq");
  }
  if (field == FieldChoice::constant && !(sigma_value > 0.0))
    throw InvalidArgument("--sigma must be positive");
  if (field == FieldChoice::csv && data_path.empty())
    throw InvalidArgument("the csv sigma field needs --data");
  if (sigma_bounds_lo.has_value() != sigma_bounds_hi.has_value())
    throw InvalidArgument("sigma bounds must be given together");
  if (normalize && data_path.empty()) throw InvalidArgument("--normalize needs --data");
  if (command == Command::ablate) {
    if (values.empty()) throw InvalidArgument("ablation needs a non-empty --values list");
    if (!std::is_sorted(values.begin(), values.end()))
      throw InvalidArgument("ablation --values must be sorted ascending");
  }
}

// ---------------------------------------------------------------- CSV

namespace {

const char* const kColumns[] = {
    "command", "kernel",   "nu",        "dim",      "n",         "field",     "sigma_scale",
    "weight",  "n_t",      "n_sigma",   "m",        "delta_omega", "nufft_tol", "t_min",
    "t_max",   "strategy", "seed",      "regime",   "eta_sq",    "axis",      "value",
    "build_s", "run_s",    "rel_error", "error_metric", "sampled_rel_error", "iterations",
    "residual", "converged"};
constexpr std::size_t kNumColumns = std::size(kColumns);

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }
std::string fmt(const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); }

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw InvalidArgument(std::string("malformed number for ") + what + ": '" + s + "'");
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != s.size()) throw InvalidArgument(std::string("malformed integer for ") + what);
  return v;
}

std::optional<double> opt_double(const std::string& s, const char* w) {
  if (s.empty()) return std::nullopt;
  return parse_double(s, w);
}
std::optional<int> opt_int(const std::string& s, const char* w) {
  if (s.empty()) return std::nullopt;
  return static_cast<int>(parse_int(s, w));
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "# schema=" << kCsvSchema << '\n';
  for (std::size_t c = 0; c < kNumColumns; ++c) os << (c ? "," : "") << kColumns[c];
  os << '\n';
  for (const ResultRow& r : rows) {
    const std::string f[] = {r.command,
                             r.kernel,
                             fmt(r.nu),
                             std::to_string(r.dim),
                             std::to_string(r.n),
                             r.field,
                             fmt(r.sigma_scale),
                             fmt(r.weight),
                             std::to_string(r.n_t),
                             std::to_string(r.n_sigma),
                             std::to_string(r.m),
                             fmt(r.delta_omega),
                             fmt(r.nufft_tol),
                             fmt(r.t_min),
                             fmt(r.t_max),
                             r.strategy,
                             std::to_string(r.seed),
                             fmt(r.regime),
                             fmt(r.eta_sq),
                             r.axis,
                             fmt(r.value),
                             fmt(r.build_s),
                             fmt(r.run_s),
                             fmt(r.rel_error),
                             r.error_metric,
                             fmt(r.sampled_rel_error),
                             fmt(r.iterations),
                             fmt(r.residual),
                             r.converged ? (*r.converged ? "1" : "0") : ""};
    static_assert(std::size(f) == kNumColumns);
    for (std::size_t c = 0; c < kNumColumns; ++c) os << (c ? "," : "") << f[c];
    os << '\n';
  }
}

std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "# schema=" + std::to_string(kCsvSchema))
    throw InvalidArgument("missing or unsupported CSV schema line");
  if (!std::getline(is, line) || split(line).size() != kNumColumns)
    throw InvalidArgument("CSV header does not match the schema");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != kNumColumns) throw InvalidArgument("CSV row has the wrong number of fields");
    ResultRow r;
    std::size_t i = 0;
    r.command = f[i++];
    r.kernel = f[i++];
    r.nu = opt_double(f[i++], "nu");
    r.dim = static_cast<int>(parse_int(f[i++], "dim"));
    r.n = static_cast<std::size_t>(parse_int(f[i++], "n"));
    r.field = f[i++];
    r.sigma_scale = parse_double(f[i++], "sigma_scale");
    r.weight = parse_double(f[i++], "weight");
    r.n_t = static_cast<int>(parse_int(f[i++], "n_t"));
    r.n_sigma = static_cast<int>(parse_int(f[i++], "n_sigma"));
    r.m = static_cast<int>(parse_int(f[i++], "m"));
    r.delta_omega = parse_double(f[i++], "delta_omega");
    r.nufft_tol = parse_double(f[i++], "nufft_tol");
    r.t_min = parse_double(f[i++], "t_min");
    r.t_max = parse_double(f[i++], "t_max");
    r.strategy = f[i++];
    r.seed = std::stoull(f[i++]);
    r.regime = opt_int(f[i++], "regime");
    r.eta_sq = opt_double(f[i++], "eta_sq");
    r.axis = f[i++];
    r.value = opt_double(f[i++], "value");
    r.build_s = parse_double(f[i++], "build_s");
    r.run_s = parse_double(f[i++], "run_s");
    r.rel_error = opt_double(f[i++], "rel_error");
    r.error_metric = f[i++];
    r.sampled_rel_error = opt_double(f[i++], "sampled_rel_error");
    r.iterations = opt_int(f[i++], "iterations");
    r.residual = opt_double(f[i++], "residual");
    const std::string& conv = f[i++];
    if (!conv.empty()) r.converged = conv == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

// ---------------------------------------------------------------- data files

Dataset load_data_csv(const std::string& path, bool normalize) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("data file is empty");
  const std::vector<std::string> header = split(line);
  int dim = 0;
  while (dim < static_cast<int>(header.size()) && header[dim] == "x" + std::to_string(dim + 1))
    ++dim;
  if (dim < 1 || dim > 3) throw InvalidArgument("data header must start with x1[,x2[,x3]]");
  int y_col = -1, s_col = -1;
  for (std::size_t c = dim; c < header.size(); ++c) {
    if (header[c] == "y" && y_col < 0) y_col = static_cast<int>(c);
    else if (header[c] == "sigma" && s_col < 0) s_col = static_cast<int>(c);
    else throw InvalidArgument("unexpected data column '" + header[c] + "'");
  }
  std::vector<double> coords, y, sigma;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != header.size())
      throw InvalidArgument("data line " + std::to_string(lineno) + " has the wrong field count");
    for (int i = 0; i < dim; ++i) coords.push_back(parse_double(f[i], "coordinate"));
    if (y_col >= 0) y.push_back(parse_double(f[y_col], "y"));
    if (s_col >= 0) sigma.push_back(parse_double(f[s_col], "sigma"));
  }
  if (coords.empty()) throw InvalidArgument("data file has no points");

  Dataset ds;
  ds.shift.assign(dim, 0.0);
  if (normalize) {
    const std::size_t n = coords.size() / dim;
    double half = 0.0;
    for (int i = 0; i < dim; ++i) {
      double lo = coords[i], hi = coords[i];
      for (std::size_t p = 0; p < n; ++p) {
        lo = std::min(lo, coords[p * dim + i]);
        hi = std::max(hi, coords[p * dim + i]);
      }
      ds.shift[i] = 0.5 * (lo + hi);
      half = std::max(half, 0.5 * (hi - lo));
    }
    ds.scale = half > 0.0 ? half : 1.0;
    for (std::size_t p = 0; p < n; ++p)
      for (int i = 0; i < dim; ++i) {
        double& v = coords[p * dim + i];
        v = std::clamp((v - ds.shift[i]) / ds.scale, -1.0, 1.0);
      }
    for (double& s : sigma) s /= ds.scale;
    std::ostringstream os;
    os << "--normalize: coordinates mapped by (x - c) / " << ds.scale
       << "; the kernel is now defined in the transformed coordinates";
    warn(os.str());
  }
  ds.points = PointSet(dim, std::move(coords));
  if (y_col >= 0) ds.y = std::move(y);
  if (s_col >= 0) ds.sigma = std::move(sigma);
  return ds;
}

// ---------------------------------------------------------------- setup

namespace {

int default_m(int dim) { return dim == 1 ? 400 : dim == 2 ? 200 : 40; }

// Solve regimes fix eta^2 and the kernel scaling; see run_solve_bench.
struct RegimeSettings {
  double eta_sq;
  double sigma_scale;
  double weight;
  int n_sigma;
  int m;
};

RegimeSettings regime_settings(int regime, std::size_t n, int dim) {
  const double nd = static_cast<double>(n);
  if (regime == 1) return {nd / 2e6, 1.0, 1.0, 15, 75};
  return {0.1, std::pow(nd / 10.0, -1.0 / dim), std::pow(nd / 10.0, -0.5), 15,
          static_cast<int>(std::llround(3.0 * std::pow(nd, 1.0 / dim)))};
}

ScalarField csv_sigma_field(const PointSet& pts, const std::vector<double>& sigma) {
  auto table = std::make_shared<std::map<std::vector<double>, double>>();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto x = pts[i];
    (*table)[std::vector<double>(x.begin(), x.end())] = sigma[i];
  }
  return [table](std::span<const double> x) {
    const auto it = table->find(std::vector<double>(x.begin(), x.end()));
    if (it == table->end())
      throw DomainError("the csv sigma field is only defined at the data points");
    return it->second;
  };
}

}  // namespace

ApproxParams resolve_params(const RunConfig& cfg, const KernelSpec& spec) {
  const int d = cfg.dim;
  if (cfg.auto_eps) {
    ApproxParams p = select_params(*cfg.auto_eps, spec, d);
    if (cfg.nufft_tol) p.nufft_tol = *cfg.nufft_tol;
    return p;
  }
  ApproxParams p;
  if (!spec.is_squared_exponential()) {
    const TRange tr = default_t_range(cfg.eps, spec.nu());
    p.t_min = tr.t_min;
    p.t_max = tr.t_max;
    p.n_t = cfg.n_t.value_or(20);
  }
  p.n_sigma = cfg.n_sigma.value_or(20);
  p.m = cfg.m.value_or(default_m(d));
  p.nufft_tol = cfg.nufft_tol.value_or(cfg.eps / 10.0);
  if (cfg.delta_omega) {
    p.delta_omega = *cfg.delta_omega;
  } else {
    p.delta_omega = default_grid(cfg.eps, derived_constants(spec, p), p.m, d).delta_omega;
  }
  return p;
}

Problem prepare(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.validate();
  Problem pb;
  std::optional<std::vector<double>> csv_sigma;
  double unit = 1.0;  // length unit after normalization
  if (!cfg.data_path.empty()) {
    Dataset ds = load_data_csv(cfg.data_path, cfg.normalize);
    if (ds.points.dim() != cfg.dim) {
      std::ostringstream os;
      os << "data file has dimension " << ds.points.dim() << " but --dim is " << cfg.dim;
      throw InvalidArgument(os.str());
    }
    pb.points = std::move(ds.points);
    pb.y = std::move(ds.y);
    csv_sigma = std::move(ds.sigma);
    unit = ds.scale;
    cfg.n = pb.points.size();
  } else {
    pb.points = gen_dataset(cfg.dim, cfg.n, derive_seed(cfg.seed, 0));
  }

  if (cfg.command == Command::solve) {
    const RegimeSettings rs = regime_settings(cfg.regime, cfg.n, cfg.dim);
    pb.sigma_scale = rs.sigma_scale;
    pb.weight = rs.weight;
    if (!cfg.n_sigma && !cfg.auto_eps) cfg.n_sigma = rs.n_sigma;
    if (!cfg.m && !cfg.auto_eps) cfg.m = rs.m;
  }
  const double s = pb.sigma_scale / unit;

  ScalarField sigma;
  double lo = 0.0, hi = 0.0;
  switch (cfg.field) {
    case FieldChoice::sigma_ref:
      sigma = [s](std::span<const double> x) { return s * sigma_ref(x); };
      lo = s * kSigmaRefMin;
      hi = s * kSigmaRefMax;
      break;
    case FieldChoice::constant:
      sigma = constant_field(s * cfg.sigma_value);
      lo = hi = s * cfg.sigma_value;
      break;
    case FieldChoice::csv: {
      if (!csv_sigma) throw InvalidArgument("the csv sigma field needs a 'sigma' data column");
      std::vector<double> v = *csv_sigma;
      for (double& x : v) x *= pb.sigma_scale;
      sigma = csv_sigma_field(pb.points, v);
      lo = *std::min_element(v.begin(), v.end());
      hi = *std::max_element(v.begin(), v.end());
      break;
    }
  }
  if (cfg.sigma_bounds_lo) {
    lo = s * *cfg.sigma_bounds_lo;
    hi = s * *cfg.sigma_bounds_hi;
  }
  const ScalarField weight = constant_field(pb.weight);
  pb.spec = cfg.kernel == KernelKind::matern ? make_matern(cfg.nu, sigma, weight, lo, hi)
                                             : make_squared_exponential(sigma, weight, lo, hi);
  pb.params = resolve_params(cfg, pb.spec);
  return pb;
}

// ---------------------------------------------------------------- benches

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

ResultRow base_row(const RunConfig& cfg, const Problem& pb) {
  ResultRow r;
  r.command = to_string(cfg.command);
  r.kernel = to_string(cfg.kernel);
  if (cfg.kernel == KernelKind::matern) r.nu = cfg.nu;
  r.dim = pb.points.dim();
  r.n = pb.points.size();
  r.field = to_string(cfg.field);
  r.sigma_scale = pb.sigma_scale;
  r.weight = pb.weight;
  r.n_t = pb.params.n_t;
  r.n_sigma = pb.params.n_sigma;
  r.m = pb.params.m;
  r.delta_omega = pb.params.delta_omega;
  r.nufft_tol = pb.params.nufft_tol;
  r.t_min = pb.params.t_min;
  r.t_max = pb.params.t_max;
  r.seed = cfg.seed;
  return r;
}

const char* strategy_name(CouplingStrategy s) {
  return s == CouplingStrategy::coupled ? "coupled" : "streaming";
}

double rel_error(std::span<const double> approx, std::span<const double> exact) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    num += (approx[i] - exact[i]) * (approx[i] - exact[i]);
    den += exact[i] * exact[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

ResultRow matvec_once(const RunConfig& cfg, const Problem& pb) {
  ResultRow row = base_row(cfg, pb);
  const std::size_t n = pb.points.size();
  SplitMix64 rng(derive_seed(cfg.seed, 1));
  std::vector<double> alpha(n);
  for (double& a : alpha) a = rng.uniform();

  const auto t0 = Clock::now();
  const MatvecPlan plan = MatvecPlan::build(pb.spec, pb.points, pb.params);
  row.build_s = seconds_since(t0);
  const auto t1 = Clock::now();
  const std::vector<double> y = plan.apply(alpha);
  row.run_s = seconds_since(t1);
  row.strategy = strategy_name(plan.strategy());

  if (n <= cfg.oracle_cap) {
    row.rel_error = rel_error(y, dense_matvec(pb.spec, pb.points, alpha, cfg.oracle_cap));
    row.error_metric = "full";
  } else {
    // Exact rows at 512 sampled indices (partial Fisher-Yates).
    const std::size_t k = std::min<std::size_t>(512, n);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.next() % (n - i)]);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    std::vector<double> qc, approx;
    for (std::size_t i : idx) {
      const auto x = pb.points[i];
      qc.insert(qc.end(), x.begin(), x.end());
      approx.push_back(y[i]);
    }
    const PointSet query(pb.points.dim(), std::move(qc));
    const std::vector<double> exact = dense_cross_matvec(pb.spec, pb.points, alpha, query,
                                                         std::numeric_limits<std::size_t>::max());
    row.sampled_rel_error = rel_error(approx, exact);
    row.error_metric = "sampled512";
  }
  return row;
}

}  // namespace

std::vector<ResultRow> run_matvec_bench(const RunConfig& cfg) {
  const Problem pb = prepare(cfg);
  return {matvec_once(cfg, pb)};
}

std::vector<ResultRow> run_ablation(const RunConfig& cfg) {
  if (cfg.values.empty()) throw InvalidArgument("ablation needs a non-empty --values list");
  if (cfg.auto_eps) throw InvalidArgument("ablation holds explicit parameters; drop --auto-eps");
  std::vector<ResultRow> rows;
  for (double v : cfg.values) {
    RunConfig c = cfg;
    const long iv = std::lround(v);
    switch (cfg.axis) {
      case AblationAxis::n_t: c.n_t = static_cast<int>(iv); break;
      case AblationAxis::n_sigma: c.n_sigma = static_cast<int>(iv); break;
      case AblationAxis::m: c.m = static_cast<int>(iv); break;
      case AblationAxis::n: c.n = static_cast<std::size_t>(iv); break;
    }
    const Problem pb = prepare(c);
    ResultRow r = matvec_once(c, pb);
    r.axis = to_string(cfg.axis);
    r.value = v;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> run_solve_bench(const RunConfig& cfg) {
  Problem pb = prepare(cfg);
  const RegimeSettings rs = regime_settings(cfg.regime, pb.points.size(), pb.points.dim());
  ResultRow row = base_row(cfg, pb);
  row.regime = cfg.regime;
  row.eta_sq = rs.eta_sq;

  Observations obs;
  obs.eta_sq = rs.eta_sq;
  if (pb.y) {
    obs.y = *pb.y;
  } else {
    SplitMix64 rng(derive_seed(cfg.seed, 2));
    obs.y.resize(pb.points.size());
    for (double& v : obs.y) v = rng.uniform();
  }

  const auto t0 = Clock::now();
  const MatvecPlan plan = MatvecPlan::build(pb.spec, pb.points, pb.params);
  row.build_s = seconds_since(t0);
  const auto t1 = Clock::now();
  const SolveReport rep = cg_solve(plan, obs, cfg.cg_tol, cfg.max_iter);
  row.run_s = seconds_since(t1);
  row.strategy = strategy_name(plan.strategy());
  row.iterations = rep.iterations;
  row.residual = rep.final_residual;
  row.converged = rep.converged;
  return {row};
}

void write_phi_table(std::ostream& os, double nu, double eps) {
  const TRange tr = default_t_range(eps, nu);
  const QuadratureScheme sch = build_scheme(Matern{nu}, tr.t_min, tr.t_max, tr.n_t, 1);
  const bool closed = has_closed_form(nu);
  os << "# schema=" << kCsvSchema << '\n' << "nu,r,phi_exact,phi_quadrature,abs_error,exact_source\n";
  for (int i = 0; i < 50; ++i) {
    const double r = 5.0 * i / 49.0;
    const double exact =
        matern_phi(nu, r, closed ? PhiMode::closed_form : PhiMode::quadrature_oracle);
    const double q = reconstruct_phi(sch, nu, r);
    os << fmt(nu) << ',' << fmt(r) << ',' << fmt(exact) << ',' << fmt(q) << ','
       << fmt(std::abs(q - exact)) << ',' << (closed ? "closed_form" : "quadrature_oracle") << '\n';
  }
}

}  // namespace nsgp
