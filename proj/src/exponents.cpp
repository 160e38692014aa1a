#include "mixnorm/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mixnorm/errors.hpp"

namespace mixnorm {

namespace {

void require_exponent(double p, const char* what) {
  if (std::isnan(p) || p < 1.0) {
    throw DomainError(std::string(what) + ": exponent " + std::to_string(p) +
                      " is below 1");
  }
}

}  // namespace

std::string to_string(Field f) { return f == Field::real ? "real" : "complex"; }

Field field_from_string(const std::string& s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw ParseError("unknown field '" + s + "' (expected real or complex)");
}

ExponentVector::ExponentVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("exponent vector must have at least one entry");
  for (double v : values_) require_exponent(v, "ExponentVector");
}

ExponentVector::ExponentVector(std::initializer_list<double> values)
    : ExponentVector(std::vector<double>(values)) {}

ExponentVector ExponentVector::uniform(std::size_t m, double value) {
  return ExponentVector(std::vector<double>(m, value));
}

double ExponentVector::reciprocal_sum() const noexcept {
  double sum = 0.0;
  for (double v : values_) sum += reciprocal(v);
  return sum;
}

bool ExponentVector::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v != kInf; });
}

ProblemSpec ProblemSpec::scalar(std::size_t m, Field field) {
  ProblemSpec spec;
  spec.m = m;
  spec.p = ExponentVector::uniform(m, kInf);
  spec.field = field;
  return spec;
}

void ProblemSpec::validate() const {
  if (m == 0) throw DomainError("arity m must be positive");
  if (p.size() != m) {
    throw DomainError("domain exponent vector has length " + std::to_string(p.size()) +
                      ", expected m = " + std::to_string(m));
  }
  if (!(1.0 <= s && s <= q_cod && q_cod <= 2.0)) {
    throw DomainError("codomain exponents must satisfy 1 <= s <= q_cod <= 2");
  }
}

double ProblemSpec::budget_excess() const {
  return 1.0 / s - 1.0 / q_cod - p.reciprocal_sum();
}

ConstantSpec ConstantSpec::defaults(Field field) {
  ConstantSpec c;
  c.khintchine_base = field == Field::real ? std::sqrt(2.0) : 2.0 / std::sqrt(M_PI);
  return c;
}

double conjugate_exponent(double p) {
  require_exponent(p, "conjugate_exponent");
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  // p/(p-1) loses less precision than 1/(1 - 1/p) near p = 1
  return p / (p - 1.0);
}

double ksz_alpha(double p) {
  require_exponent(p, "ksz_alpha");
  return p >= 2.0 ? 0.5 - reciprocal(p) : 0.0;
}

double lambda_base(const ProblemSpec& spec) {
  spec.validate();
  const double denom = 0.5 + spec.budget_excess();
  const double lambda = denom > 0.0 ? 1.0 / denom : kInf;
  if (lambda > 2.0 + kExponentTol || lambda < 1.0 - kExponentTol) {
    throw InfeasibleSpecError("lambda = " + std::to_string(lambda) + " lies outside [1, 2]",
                              lambda);
  }
  return std::clamp(lambda, 1.0, 2.0);
}

double rho_exponent(const ProblemSpec& spec) {
  spec.validate();
  const double excess = spec.budget_excess();
  if (excess < -kExponentTol) {
    throw InfeasibleSpecError(
        "1/s - 1/q - |1/p| = " + std::to_string(excess) + " is negative", excess);
  }
  const double m = static_cast<double>(spec.m);
  return 2.0 * m / (m + 2.0 * std::max(excess, 0.0));
}

Feasibility feasibility(const ExponentVector& q, const ProblemSpec& spec) {
  spec.validate();
  if (q.size() != spec.m) {
    throw DomainError("q has length " + std::to_string(q.size()) + ", expected m = " +
                      std::to_string(spec.m));
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < 1.0 || q[i] > 2.0) {
      throw DomainError("q_" + std::to_string(i + 1) + " = " + std::to_string(q[i]) +
                        " lies outside [1, 2]");
    }
  }
  Feasibility out;
  out.lambda = lambda_base(spec);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < out.lambda - kExponentTol) {
      throw RangeViolationError("q_" + std::to_string(i + 1) + " = " + std::to_string(q[i]) +
                                    " is below lambda = " + std::to_string(out.lambda),
                                i);
    }
  }
  const double budget = 0.5 * static_cast<double>(spec.m) + spec.budget_excess();
  out.slack = budget - q.reciprocal_sum();
  out.feasible = out.slack >= -kExponentTol;
  return out;
}

std::vector<double> hull_vertex(std::size_t k, std::size_t m, double lambda) {
  if (k >= m) throw DomainError("hull vertex index out of range");
  std::vector<double> v(m, 0.5);
  v[k] = 1.0 / lambda;
  return v;
}

std::vector<double> hull_decompose(const ExponentVector& q, double lambda) {
  if (!(lambda >= 1.0 && lambda <= 2.0)) {
    throw DomainError("lambda must lie in [1, 2]");
  }
  const std::size_t m = q.size();
  const double a = 0.5;
  const double b = 1.0 / lambda;
  const double height = b - a;

  if (height <= kExponentTol) {
    for (std::size_t k = 0; k < m; ++k) {
      if (std::abs(reciprocal(q[k]) - a) > kExponentTol) {
        throw DegenerateSimplexError(
            "lambda = 2 collapses every vertex to (2, ..., 2); q differs from it");
      }
    }
    return std::vector<double>(m, 1.0 / static_cast<double>(m));
  }

  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double x = reciprocal(q[k]);
    if (x < a - kExponentTol || x > b + kExponentTol) {
      throw NotOnFaceError("1/q_" + std::to_string(k + 1) + " lies outside [1/2, 1/lambda]",
                           std::max(a - x, x - b));
    }
    sum += x;
  }
  const double target = static_cast<double>(m - 1) * a + b;
  const double residual = sum - target;
  if (std::abs(residual) > kExponentTol * static_cast<double>(m)) {
    throw NotOnFaceError("sum of 1/q_k misses (m-1)/2 + 1/lambda by " +
                             std::to_string(residual),
                         residual);
  }

  std::vector<double> theta(m);
  for (std::size_t k = 0; k < m; ++k) theta[k] = (reciprocal(q[k]) - a) / height;
  return theta;
}

std::vector<double> hull_reconstruct(std::span<const double> weights, double lambda) {
  const std::size_t m = weights.size();
  std::vector<double> x(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto vertex = hull_vertex(k, m, lambda);
    for (std::size_t i = 0; i < m; ++i) x[i] += weights[k] * vertex[i];
  }
  return x;
}

ExponentVector interpolate_exponents(const ExponentVector& p, const ExponentVector& q,
                                     double theta) {
  if (p.size() != q.size()) {
    throw DomainError("interpolate_exponents: length mismatch " + std::to_string(p.size()) +
                      " vs " + std::to_string(q.size()));
  }
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw DomainError("interpolate_exponents: theta must lie in [0, 1]");
  }
  if (theta == 0.0) return q;
  if (theta == 1.0) return p;
  std::vector<double> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = theta * reciprocal(p[i]) + (1.0 - theta) * reciprocal(q[i]);
    // rounding can push 1/r a hair above 1
    r[i] = x >= 1.0 ? 1.0 : from_reciprocal(x);
  }
  return ExponentVector(std::move(r));
}

double bennett_carl_r(double s, double q_cod) {
  if (!(1.0 <= s && s <= q_cod && q_cod <= 2.0)) {
    throw DomainError("bennett_carl_r requires 1 <= s <= q_cod <= 2");
  }
  return 1.0 / (0.5 + 1.0 / s - 1.0 / q_cod);
}

double bilinear_sharp_constant(double p, double q) {
  if (!(p >= 1.0 && p <= 2.0 && q >= 1.0 && q <= 2.0)) {
    throw DomainError("bilinear sharp constant requires p, q in [1, 2]");
  }
  const double e = 1.0 / p + 1.0 / q;
  if (e > 1.5 + kExponentTol) {
    throw InfeasibleSpecError("1/p + 1/q = " + std::to_string(e) + " exceeds 3/2", e);
  }
  return std::exp2(e - 1.0);
}

double ConstantBounds::bilinear_sharp(double p, double q) const {
  if (field != Field::real) {
    throw UnsupportedError("optimality of the bilinear constant is only known over the reals");
  }
  if (m != 2) throw UnsupportedError("the bilinear sharp constant needs m = 2");
  return bilinear_sharp_constant(p, q);
}

ConstantBounds constant_bounds(std::size_t m, Field field, const ConstantSpec& consts) {
  if (m == 0) throw DomainError("arity m must be positive");
  if (!(consts.cotype2_constant > 0.0 && consts.summing_norm > 0.0 &&
        consts.khintchine_base > 0.0)) {
    throw DomainError("constants must be positive");
  }
  ConstantBounds out;
  out.field = field;
  out.m = m;
  const double e = static_cast<double>(m - 1);
  out.bh_upper = std::pow(consts.khintchine_base, e);
  out.mixed_upper = std::pow(std::sqrt(2.0) * consts.cotype2_constant, e) * consts.summing_norm;
  return out;
}

double interpolated_constant(const ExponentVector& q, const ProblemSpec& spec,
                             const ConstantSpec& consts) {
  if (spec.s != 1.0 || spec.q_cod != 2.0 || spec.p.reciprocal_sum() != 0.0) {
    throw UnsupportedError("interpolated constant is only available for scalar forms on c0");
  }
  const auto f = feasibility(q, spec);
  if (!f.feasible) {
    throw InfeasibleSpecError("q is infeasible (slack " + std::to_string(f.slack) + ")",
                              f.slack);
  }
  double theta = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) theta += reciprocal(q[i]) - 0.5;
  theta = std::clamp(theta / (1.0 / f.lambda - 0.5), 0.0, 1.0);
  return std::pow(constant_bounds(spec.m, spec.field, consts).bh_upper, theta);
}

}  // namespace mixnorm
