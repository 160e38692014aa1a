#pragma once

// Operator norms of multilinear forms over products of l_p unit balls
// (p = inf stands for the finite section of c0).
//
//   ||A|| = sup { |A(x_1, ..., x_m)| : ||x_k||_{p_k} <= 1 }
//
// Vector-valued forms A: l_{p_1} x ... x l_{p_m} -> l_s are measured in l_s and
// handled through the isometric (m+1)-linear scalar form with p_{m+1} = s*.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixnorm/exponents.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

struct MultilinearForm {
  CoefficientTensor tensor;
  ExponentVector p;
  /// Codomain l_s exponent; present iff the tensor has a codomain axis.
  std::optional<double> codomain_s;
  /// Scalars the arguments range over. A real tensor may be evaluated on
  /// complex arguments; a complex tensor always uses complex arguments.
  Field field = Field::real;

  std::size_t arity() const noexcept { return tensor.arity(); }
  bool vector_valued() const noexcept { return tensor.has_codomain(); }
  bool uses_complex_arguments() const noexcept {
    return field == Field::complex || tensor.is_complex();
  }
  void validate() const;
};

enum class NormKind { exact, lower_bound };
std::string to_string(NormKind kind);

struct NormEstimate {
  double value = 0.0;
  NormKind kind = NormKind::lower_bound;
  /// One argument per slot, each in its unit ball. Real forms have zero
  /// imaginary parts throughout.
  std::vector<std::vector<Complex>> witness;
  std::size_t iterations = 0;
  std::size_t restarts_used = 0;
  bool converged = true;
};

/// Full contraction; returns the codomain vector (length 1 for scalar forms).
/// Real tensors only.
std::vector<double> evaluate(const MultilinearForm& form,
                             const std::vector<std::vector<double>>& args);
std::vector<Complex> evaluate_complex(const MultilinearForm& form,
                                      const std::vector<std::vector<Complex>>& args);

/// |A(x)| for scalar forms, ||A(x)||_s for vector-valued ones.
double value_at(const MultilinearForm& form, const std::vector<std::vector<Complex>>& args);

/// Unit vector x of l_p with <g, x> = sum g_i x_i = ||g||_{p*}. Ties for
/// p = 1 go to the lowest index; zero coordinates map to +1 for p = inf.
std::vector<double> dual_maximizer(std::span<const double> g, double p);
std::vector<Complex> dual_maximizer(std::span<const Complex> g, double p);

/// ||g||_{p*}.
double dual_norm(std::span<const double> g, double p);

struct AscentOptions {
  std::size_t restarts = 32;
  std::size_t max_iters = 200;
  /// Stop a restart once a full sweep improves the value by less than this
  /// relative amount.
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

/// Lower bound on ||A|| by block-coordinate ascent: each slot in turn jumps to
/// the closed-form maximizer given the others. Best of `restarts` random starts.
NormEstimate alternating_ascent(const MultilinearForm& form, const AscentOptions& options = {});

inline constexpr double kDefaultEnumerationBudget = 16777216.0;  // 2^24

/// Number of extreme-point patterns exact_sign_enumeration visits, or nullopt
/// (with a reason) when the form is outside its reach.
std::optional<double> enumeration_count(const MultilinearForm& form, std::string* reason = nullptr);

bool oracle_applicable(const MultilinearForm& form, double budget = kDefaultEnumerationBudget);

/// Exact ||A|| for real forms whose slots other than the last have p in
/// {1, inf}: enumerates extreme points of those balls (sign vectors, or basis
/// vectors for p = 1) and closes the last slot with its dual norm.
NormEstimate exact_sign_enumeration(const MultilinearForm& form,
                                    double budget = kDefaultEnumerationBudget);

enum class NormMethod { automatic, oracle, ascent };
NormMethod norm_method_from_string(const std::string& s);

/// Oracle when applicable within budget (or when requested), ascent otherwise.
NormEstimate estimate_norm(const MultilinearForm& form, NormMethod method = NormMethod::automatic,
                           const AscentOptions& options = {},
                           double budget = kDefaultEnumerationBudget);

/// mixed_norm(form.tensor, spec) / norm.value. With a lower-bound norm this
/// over-estimates the true ratio.
double ratio(const MultilinearForm& form, const MixedNormSpec& spec, const NormEstimate& norm);

}  // namespace mixnorm
