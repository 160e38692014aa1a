#pragma once

// Arithmetic on summability exponents: conjugates, the feasibility budget of
// nested mixed-norm inequalities, the lambda/rho exponent formulas, the simplex
// face decomposition used for interpolation, and the associated constants.
//
// Exponents are doubles in [1, inf]; infinity is the IEEE infinity and
// reciprocal() maps it to exactly 0.

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mixnorm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute tolerance on feasibility slack and face-membership sums.
inline constexpr double kExponentTol = 1e-12;

/// 1/p with 1/inf == 0.
inline double reciprocal(double p) noexcept { return p == kInf ? 0.0 : 1.0 / p; }

/// Inverse of reciprocal(): 1/x, with 1/0 == inf.
inline double from_reciprocal(double x) noexcept { return x == 0.0 ? kInf : 1.0 / x; }

enum class Field { real, complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

/// An m-tuple of exponents in [1, inf].
class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(std::vector<double> values);
  ExponentVector(std::initializer_list<double> values);

  /// m copies of the same exponent.
  static ExponentVector uniform(std::size_t m, double value);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// |1/p| = sum of reciprocals.
  double reciprocal_sum() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;

 private:
  std::vector<double> values_;
};

/// Domain exponents p, codomain exponents 1 <= s <= q_cod <= 2 and scalar field.
///
/// The scalar multilinear case is s = 1, q_cod = 2, p = (inf, ..., inf).
struct ProblemSpec {
  std::size_t m = 1;
  ExponentVector p;
  double s = 1.0;
  double q_cod = 2.0;
  Field field = Field::real;

  /// Scalar-valued forms on c0 x ... x c0.
  static ProblemSpec scalar(std::size_t m, Field field = Field::real);

  /// Throws DomainError when an invariant fails.
  void validate() const;

  /// 1/s - 1/q_cod - |1/p|; must be >= 0 for the main inequality family.
  double budget_excess() const;
};

/// Banach-space constants entering the upper bounds.
struct ConstantSpec {
  double cotype2_constant = 1.0;
  double summing_norm = 1.0;
  double khintchine_base = 1.4142135623730951;

  /// sqrt(2) over the reals, 2/sqrt(pi) over the complex field; scalar
  /// codomain with the identity map.
  static ConstantSpec defaults(Field field);
};

double conjugate_exponent(double p);

/// max(1/2 - 1/p, 0): the per-slot growth exponent of random sign forms.
double ksz_alpha(double p);

/// lambda = 1 / (1/2 + 1/s - 1/q_cod - |1/p|). Throws InfeasibleSpecError
/// unless lambda lands in [1, 2].
double lambda_base(const ProblemSpec& spec);

/// rho = 2m / (m + 2 (1/s - 1/q_cod - |1/p|)), the common exponent on the
/// boundary of the feasible region.
double rho_exponent(const ProblemSpec& spec);

struct Feasibility {
  bool feasible = false;
  /// (m/2 + 1/s - 1/q_cod - |1/p|) - sum 1/q_i
  double slack = 0.0;
  double lambda = 0.0;
};

Feasibility feasibility(const ExponentVector& q, const ProblemSpec& spec);

/// Vertex M_k in reciprocal coordinates: 1/2 everywhere except 1/lambda at k.
std::vector<double> hull_vertex(std::size_t k, std::size_t m, double lambda);

/// Barycentric weights of (1/q_1, ..., 1/q_m) with respect to the vertices M_k.
std::vector<double> hull_decompose(const ExponentVector& q, double lambda);

/// sum_k weights[k] * M_k, in reciprocal coordinates.
std::vector<double> hull_reconstruct(std::span<const double> weights, double lambda);

/// Componentwise 1/r_i = theta/p_i + (1 - theta)/q_i.
ExponentVector interpolate_exponents(const ExponentVector& p, const ExponentVector& q,
                                     double theta);

/// r with 1/r = 1/2 + 1/s - 1/q_cod, the summing exponent of l_s -> l_q_cod.
double bennett_carl_r(double s, double q_cod);

/// 2^{1/p + 1/q - 1}, the optimal real bilinear constant for 1/p + 1/q <= 3/2.
double bilinear_sharp_constant(double p, double q);

struct ConstantBounds {
  Field field = Field::real;
  std::size_t m = 1;
  /// khintchine_base^{m-1}
  double bh_upper = 1.0;
  /// (sqrt(2) C_2)^{m-1} pi_{r,1}
  double mixed_upper = 1.0;

  /// Only defined for the real bilinear case; throws UnsupportedError otherwise.
  double bilinear_sharp(double p, double q) const;
};

ConstantBounds constant_bounds(std::size_t m, Field field, const ConstantSpec& consts);

/// Upper constant for the scalar nested inequality at an arbitrary feasible q,
/// obtained by interpolating between bh_upper on the lambda face and 1 at
/// (2, ..., 2): bh_upper^theta with theta = sum(1/q_i - 1/2) / (1/lambda - 1/2).
/// Reduces to bilinear_sharp_constant for the real bilinear case.
double interpolated_constant(const ExponentVector& q, const ProblemSpec& spec,
                             const ConstantSpec& consts);

}  // namespace mixnorm
