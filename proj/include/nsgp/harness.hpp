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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsgp/kernel.hpp"
#include "nsgp/params.hpp"

namespace nsgp {

/// SplitMix64: counter-based and portable, so a seed reproduces the same
/// stream on every platform and compiler.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Independent stream `stream` for a user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// N points uniform on the open box (-1, 1)^d.
PointSet gen_dataset(int dim, std::size_t n, std::uint64_t seed);

/// (1/6)(Prod_i cos(pi x_i) + 2), ranging over [1/6, 1/2].
double sigma_ref(std::span<const double> x);
inline constexpr double kSigmaRefMin = 1.0 / 6.0 - 0.01;
inline constexpr double kSigmaRefMax = 0.5 + 0.01;

enum class Command { matvec, ablate, solve, validate, phi };
enum class KernelKind { matern, sqexp };
enum class FieldChoice { sigma_ref, constant, csv };
enum class AblationAxis { n_t, n_sigma, m, n };

const char* to_string(Command c) noexcept;
const char* to_string(KernelKind k) noexcept;
const char* to_string(FieldChoice f) noexcept;
const char* to_string(AblationAxis a) noexcept;

struct RunConfig {
  Command command = Command::matvec;
  int dim = 1;
  std::size_t n = 10000;
  KernelKind kernel = KernelKind::matern;
  double nu = 1.5;
  FieldChoice field = FieldChoice::sigma_ref;
  double sigma_value = 0.3;  // constant field
  std::optional<double> sigma_bounds_lo, sigma_bounds_hi;  // override declared bounds
  // Explicit parameters; any unset one takes its documented default.
  std::optional<int> n_t, n_sigma, m;
  std::optional<double> delta_omega;
  std::optional<double> auto_eps;  // exclusive with the explicit parameters
  double eps = 1e-6;               // target used for defaults (t-range, dw, NUFFT tol)
  std::optional<double> nufft_tol;
  std::uint64_t seed = 1;
  int regime = 1;
  std::optional<double> eta_sq;
  double cg_tol = 1e-6;
  int max_iter = 1000;
  AblationAxis axis = AblationAxis::n_sigma;
  std::vector<double> values;
  std::string data_path;
  bool normalize = false;
  std::size_t oracle_cap = kDefaultOracleCap;

  /// Throws InvalidArgument for conflicting or out-of-range settings.
  void validate() const;
};

/// One self-describing result line. Optional fields are emitted empty.
struct ResultRow {
  std::string command;
  std::string kernel;
  std::optional<double> nu;
  int dim = 0;
  std::size_t n = 0;
  std::string field;
  double sigma_scale = 1.0;  // factor applied to the reference/constant field
  double weight = 1.0;       // constant weight field value
  int n_t = 0, n_sigma = 0, m = 0;
  double delta_omega = 0.0, nufft_tol = 0.0, t_min = 0.0, t_max = 0.0;
  std::string strategy;
  std::uint64_t seed = 0;
  std::optional<int> regime;
  std::optional<double> eta_sq;
  std::string axis;
  std::optional<double> value;
  double build_s = 0.0;
  double run_s = 0.0;  // apply or solve time
  std::optional<double> rel_error;
  std::string error_metric;  // "full", "sampled512" or empty
  std::optional<double> sampled_rel_error;  // N above the oracle cap: 512 exact rows
  std::optional<int> iterations;
  std::optional<double> residual;
  std::optional<bool> converged;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr int kCsvSchema = 1;
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
/// Parses write_csv output; throws InvalidArgument on malformed input.
std::vector<ResultRow> read_csv(std::istream& is);

/// User data: header x1,...,xd[,y][,sigma].
struct Dataset {
  PointSet points;
  std::optional<std::vector<double>> y;
  std::optional<std::vector<double>> sigma;
  double scale = 1.0;  // x_box = (x - shift) / scale when normalized
  std::vector<double> shift;
};
/// Throws InvalidArgument on malformed files and DomainError for points
/// outside [-1,1]^d unless `normalize`, which maps the bounding box into the
/// unit box with one uniform scale (and warns that the kernel changes).
Dataset load_data_csv(const std::string& path, bool normalize);

/// Everything a run needs, derived deterministically from a config.
struct Problem {
  PointSet points;
  KernelSpec spec;
  ApproxParams params;
  std::optional<std::vector<double>> y;
  double sigma_scale = 1.0;
  double weight = 1.0;
};
Problem prepare(const RunConfig& cfg);
/// Parameters for `spec` under the config's explicit/auto settings.
ApproxParams resolve_params(const RunConfig& cfg, const KernelSpec& spec);

std::vector<ResultRow> run_matvec_bench(const RunConfig& cfg);
std::vector<ResultRow> run_ablation(const RunConfig& cfg);
std::vector<ResultRow> run_solve_bench(const RunConfig& cfg);

/// r, closed form, quadrature reconstruction and their difference for
/// 50 radii in [0, 5], as CSV.
void write_phi_table(std::ostream& os, double nu, double eps);

struct ValidateOptions {
  bool inject_fault = false;
};
/// Runs every module's property suite at desk scale and prints one line per
/// suite with its timing. Returns 0 when all pass and 2 otherwise.
int run_validate(std::ostream& os, const ValidateOptions& opts = {});

}  // namespace nsgp
