#pragma once

// Extremal and counterexample forms: random sign forms with small operator
// norm, the 2x2 bilinear extremizer, the degenerate product form, and the
// vector-valued <-> scalar (d+1)-linear correspondence.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>

#include "mixnorm/exponents.hpp"
#include "mixnorm/opnorm.hpp"

namespace mixnorm {

struct KszForm {
  MultilinearForm form;
  /// 1/2 + sum_k alpha(p_k), plus alpha(s*) for vector-valued forms.
  double predicted_norm_exponent = 0.0;
  std::size_t trials_used = 0;
  std::uint64_t seed = 0;
  /// Norm estimate of the selected trial.
  NormEstimate norm;
};

struct KszOptions {
  std::size_t trials = 16;
  Field field = Field::real;
  AscentOptions ascent;
  double budget = kDefaultEnumerationBudget;
};

/// Sign tensor (unimodular in complex mode) for one trial; entry i depends
/// only on (seed, trial, i).
CoefficientTensor random_sign_tensor(const Shape& shape, std::uint64_t seed, std::uint64_t trial,
                                     Field field = Field::real);

/// Draws `trials` sign forms of shape n^m and keeps the one of smallest
/// estimated norm (ties to the lowest trial).
KszForm ksz_random(std::size_t m, std::size_t n, const ExponentVector& p, std::uint64_t seed,
                   const KszOptions& options = {});

/// Vector-valued sign form l_{p_1}^n x ... x l_{p_d}^n -> l_s^n, built as a
/// scalar (d+1)-linear form with p_{d+1} = s*.
KszForm ksz_vector(std::size_t d, std::size_t n, const ExponentVector& p, double s,
                   std::uint64_t seed, const KszOptions& options = {});

/// Vector-valued d-linear form -> scalar (d+1)-linear form with p_{d+1} = s*.
MultilinearForm flatten_vector_form(const MultilinearForm& form);

/// Inverse of flatten_vector_form: the last slot becomes the codomain l_s.
MultilinearForm unflatten_scalar_form(const MultilinearForm& form, double s);

/// A(x, y) = x1 y1 + x1 y2 + x2 y1 - x2 y2 on c0 x c0; ||A|| = 2.
MultilinearForm littlewood_extremizer();

/// A(z_1, ..., z_m) = (z_m)_1 F(z_1, ..., z_{m-1}) with F = ksz_random over the
/// first m-1 slots; ||A|| = ||F||.
MultilinearForm degenerate_counterexample(std::size_t m, std::size_t n, const ExponentVector& p,
                                          std::uint64_t seed, const KszOptions& options = {});

/// Tensor text format preceded by `p:`, `codomain_s:` (vector forms) and
/// `seed:` (when given) header lines.
void write_form(std::ostream& os, const MultilinearForm& form,
                std::optional<std::uint64_t> seed = std::nullopt);

/// Reads a form file. Missing `p:` defaults to inf in every slot; missing
/// `codomain_s:` on a vector-valued tensor defaults to 1.
MultilinearForm read_form(std::istream& is);

}  // namespace mixnorm
