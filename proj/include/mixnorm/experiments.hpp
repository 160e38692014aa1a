#pragma once

// Verification and sharpness experiments over a grid of dimensions n, with
// log-log growth fits and CSV/JSON persistence.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnorm/exponents.hpp"
#include "mixnorm/opnorm.hpp"

namespace mixnorm {

enum class ExperimentKind {
  verify_upper,
  sharpness_growth,
  bilinear_sharp,
  mixed_l2_check,
  counterexample_growth,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& s);

/// Tolerances shared by the experiment verdicts.
inline constexpr double kBoundSlack = 1e-9;
inline constexpr double kExtremizerTol = 1e-12;
inline constexpr double kExactClaimTol = 1e-10;
inline constexpr double kSlopeTol = 0.15;

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::verify_upper;
  std::size_t m = 2;
  double s = 1.0;
  double q_cod = 2.0;
  /// Domain exponents; inf in every slot when absent.
  std::optional<ExponentVector> p;
  std::optional<ExponentVector> q;
  /// Dimension grid; a per-kind default when empty.
  std::vector<std::size_t> n_values;
  std::uint64_t seed = 0;
  /// Random forms per n (verification kinds) or sign-form draws per n
  /// (growth kinds).
  std::size_t trials = 16;
  std::size_t restarts = 32;
  Field field = Field::real;
  /// Sharpness growth with forms into l_s^n instead of scalar forms.
  bool vector_valued = false;

  ExponentVector domain() const;
  ProblemSpec problem() const;
  std::vector<std::size_t> grid() const;
  void validate() const;

  /// `key = value` lines in a fixed order; the digest hashes this text.
  std::string canonical() const;
  std::string digest() const;
};

/// Parses the `key = value` config format. Unknown or repeated keys are errors.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ExperimentRecord {
  std::size_t n = 0;
  double mixed_norm = 0.0;
  double norm_estimate = 0.0;
  NormKind norm_kind = NormKind::lower_bound;
  double ratio = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;
};

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  double predicted_slope = 0.0;
};

/// Unweighted least squares of log(ratio) against log(n). Needs >= 3 records
/// with positive ratios and at least two distinct n.
GrowthFit growth_fit(std::span<const ExperimentRecord> records, double predicted_slope = 0.0);

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRecord> records;
  std::optional<GrowthFit> fit;
  /// Fit restricted to records whose norm is exact.
  std::optional<GrowthFit> certified_fit;
  bool verdict = false;
  std::string headline;
  /// "check", or "expect_failure" when a mixed-l2 run fell back to the
  /// counterexample because its hypothesis fails.
  std::string mode = "check";
  double max_ratio = 0.0;
  double max_certified_ratio = 0.0;
  std::optional<double> bound;
  std::size_t certified = 0;
  std::size_t violations = 0;
  /// Records violating a closed-form identity (mixed norm of sign tensors,
  /// left-hand side of the degenerate form, extremizer equality).
  std::size_t exact_claim_failures = 0;
};

ExperimentReport run_verify_upper(const ExperimentConfig& config);
ExperimentReport run_sharpness_growth(const ExperimentConfig& config);
ExperimentReport run_bilinear_sharp(const ExperimentConfig& config);
ExperimentReport run_mixed_l2_check(const ExperimentConfig& config);
ExperimentReport run_counterexample_growth(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Random test tensor number `index`: Gaussian, sign, or half-sparse sign
/// entries by index mod 3. Complex field uses complex Gaussian / unimodular.
CoefficientTensor random_test_tensor(const Shape& shape, std::uint64_t seed, std::uint64_t index,
                                     Field field = Field::real,
                                     std::optional<std::size_t> codomain = std::nullopt);

void write_csv(std::ostream& os, const ExperimentReport& report);
std::string summary_json(const ExperimentReport& report);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path json;
};

/// Writes `<kind>_<digest>.csv` and `.json` into out_dir, each via a temporary
/// file and rename.
OutputPaths write_outputs(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace mixnorm
