#pragma once

// Dense m-way coefficient tensors and nested mixed norms
//
//   ( sum_{i_s(1)} ( sum_{i_s(2)} ( ... sum_{i_s(m)} |T_i|^{q_m} ... )^{q_2/q_3} )^{q_1/q_2} )^{1/q_1}
//
// where s is an axis permutation. An optional trailing codomain axis holds the
// coordinates of vector-valued forms; it is reduced first, in l_{codomain_q}.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mixnorm/exponents.hpp"

namespace mixnorm {

using Complex = std::complex<double>;
using Shape = std::vector<std::size_t>;

class CoefficientTensor {
 public:
  CoefficientTensor() = default;
  /// Row-major entries over shape (times the codomain length when present).
  CoefficientTensor(Shape shape, std::vector<double> entries,
                    std::optional<std::size_t> codomain = std::nullopt);
  CoefficientTensor(Shape shape, std::vector<Complex> entries,
                    std::optional<std::size_t> codomain = std::nullopt);

  static CoefficientTensor zeros(Shape shape, std::optional<std::size_t> codomain = std::nullopt);

  /// Number of multilinear slots m (the codomain axis is not counted).
  std::size_t arity() const noexcept { return shape_.size(); }
  const Shape& shape() const noexcept { return shape_; }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }

  bool has_codomain() const noexcept { return codomain_.has_value(); }
  std::size_t codomain_length() const noexcept { return codomain_.value_or(1); }
  std::optional<std::size_t> codomain() const noexcept { return codomain_; }

  /// Shape including the codomain axis when present.
  Shape full_shape() const;
  std::size_t size() const noexcept;

  bool is_complex() const noexcept { return std::holds_alternative<std::vector<Complex>>(data_); }
  std::span<const double> real_values() const;
  std::span<const Complex> complex_values() const;
  /// Entries converted to Complex (copy).
  std::vector<Complex> as_complex() const;
  /// |T_i| in storage order.
  std::vector<double> magnitudes() const;

  /// Entry at a full multi-index (codomain coordinate last, if any).
  Complex at(std::span<const std::size_t> index) const;
  bool is_zero() const;

  /// Same coefficients with every entry multiplied by c (c real).
  CoefficientTensor scaled(double c) const;
  /// The codomain axis reinterpreted as an ordinary trailing slot.
  CoefficientTensor without_codomain() const;
  /// The last slot reinterpreted as a codomain axis.
  CoefficientTensor with_trailing_codomain() const;

  /// Permuted copy: axis k of the result is axis perm[k] of this tensor.
  /// The codomain axis, if any, stays last.
  CoefficientTensor permuted(std::span<const std::size_t> perm) const;

 private:
  void validate() const;

  Shape shape_;
  std::optional<std::size_t> codomain_;
  std::variant<std::vector<double>, std::vector<Complex>> data_;
};

/// Exponent vector, nesting order and optional codomain exponent.
///
/// sigma is 0-based: the outermost sum runs over axis sigma[0] with exponent
/// q[0], the innermost over axis sigma[m-1] with exponent q[m-1].
struct MixedNormSpec {
  ExponentVector q;
  std::vector<std::size_t> sigma;
  std::optional<double> codomain_q;

  /// Identity nesting order.
  static MixedNormSpec identity(ExponentVector q, std::optional<double> codomain_q = std::nullopt);

  void validate(std::size_t m) const;
};

/// l_p norm of |values| for p in [1, inf]; overflow-safe.
double lp_norm(std::span<const double> magnitudes, double p);
double lp_norm(std::span<const Complex> values, double p);

double mixed_norm(const CoefficientTensor& t, const MixedNormSpec& spec);

/// (sum_{i_k} (sum_{other indices} |T_i|^2)^{lambda/2})^{1/lambda}:
/// axis k outermost at exponent lambda, everything else in l_2.
double uniform_norm_tensor(const CoefficientTensor& t, std::size_t k, double lambda,
                           std::optional<double> codomain_q = std::nullopt);

/// ||T||_{l_b(l_a)} - ||T||_{l_a(l_b)} where the exponent b always belongs to
/// axes.first and a to axes.second; the left term nests axes.first outside,
/// the right term nests it inside. Remaining axes (and the codomain, if any)
/// are reduced innermost in l_2. By Minkowski's inequality the result is <= 0
/// whenever 1 <= a <= b.
double minkowski_exchange_gap(const CoefficientTensor& t, double a, double b,
                              std::pair<std::size_t, std::size_t> axes);

/// Text format: header `shape: n_1 ... n_m [codomain n]`, then one scalar per
/// line in row-major order (complex entries as `re im`). Blank lines and lines
/// starting with '#' are ignored.
void write_tensor(std::ostream& os, const CoefficientTensor& t);
CoefficientTensor read_tensor(std::istream& is);

/// Header lines of the text format that precede the data, as key/value pairs
/// (e.g. {"p", "inf inf"}). `shape` is always present.
struct TensorFileHeader {
  std::vector<std::pair<std::string, std::string>> fields;
  const std::string* find(const std::string& key) const;
};

/// Reads the header lines and the data; lets callers pick up extra keys.
CoefficientTensor read_tensor(std::istream& is, TensorFileHeader& header);

/// Formats a double with max_digits10 so files round-trip exactly.
std::string format_exact(double x);

}  // namespace mixnorm
