#include "mixnorm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "mixnorm/errors.hpp"

namespace mixnorm {

namespace {

std::size_t product(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double power(double x, double q) {
  if (x == 0.0) return 0.0;
  if (q == 1.0) return x;
  if (q == 2.0) return x * x;
  return std::exp(q * std::log(x));
}

void require_norm_exponent(double q, const char* what) {
  if (std::isnan(q) || q < 1.0) {
    throw DomainError(std::string(what) + ": exponent " + std::to_string(q) + " is below 1");
  }
}

// Reduces `axis` of a row-major magnitude array in l_q; the axis disappears
// from `shape`.
std::vector<double> reduce_axis(const std::vector<double>& values, Shape& shape,
                                std::size_t axis, double q) {
  std::size_t outer = 1;
  for (std::size_t k = 0; k < axis; ++k) outer *= shape[k];
  const std::size_t len = shape[axis];
  std::size_t inner = 1;
  for (std::size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];

  std::vector<double> out(outer * inner);
  std::vector<double> fibre(len);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      for (std::size_t j = 0; j < len; ++j) fibre[j] = values[(o * len + j) * inner + i];
      out[o * inner + i] = lp_norm(fibre, q);
    }
  }
  shape.erase(shape.begin() + static_cast<std::ptrdiff_t>(axis));
  return out;
}

// Reduces the codomain axis (if any) and returns magnitudes over the m slots.
std::vector<double> slot_magnitudes(const CoefficientTensor& t, std::optional<double> codomain_q) {
  auto mags = t.magnitudes();
  if (!t.has_codomain()) return mags;
  if (!codomain_q) {
    throw SpecError("tensor has a codomain axis but no codomain exponent was given");
  }
  require_norm_exponent(*codomain_q, "codomain norm");
  Shape shape = t.full_shape();
  return reduce_axis(mags, shape, shape.size() - 1, *codomain_q);
}

}  // namespace

CoefficientTensor::CoefficientTensor(Shape shape, std::vector<double> entries,
                                     std::optional<std::size_t> codomain)
    : shape_(std::move(shape)), codomain_(codomain), data_(std::move(entries)) {
  validate();
}

CoefficientTensor::CoefficientTensor(Shape shape, std::vector<Complex> entries,
                                     std::optional<std::size_t> codomain)
    : shape_(std::move(shape)), codomain_(codomain), data_(std::move(entries)) {
  validate();
}

CoefficientTensor CoefficientTensor::zeros(Shape shape, std::optional<std::size_t> codomain) {
  const std::size_t n = product(shape) * codomain.value_or(1);
  return CoefficientTensor(std::move(shape), std::vector<double>(n, 0.0), codomain);
}

void CoefficientTensor::validate() const {
  if (shape_.empty()) throw DomainError("tensor needs at least one slot");
  for (std::size_t n : shape_) {
    if (n == 0) throw DomainError("tensor dimensions must be positive");
  }
  if (codomain_ && *codomain_ == 0) throw DomainError("codomain length must be positive");
  const std::size_t expected = size();
  const std::size_t got = std::visit([](const auto& v) { return v.size(); }, data_);
  if (got != expected) {
    throw DomainError("tensor has " + std::to_string(got) + " entries, shape needs " +
                      std::to_string(expected));
  }
  const bool finite = std::visit(
      [](const auto& v) {
        return std::all_of(v.begin(), v.end(), [](const auto& x) {
          return std::isfinite(std::real(x)) && std::isfinite(std::imag(x));
        });
      },
      data_);
  if (!finite) throw DomainError("tensor entries must be finite");
}

Shape CoefficientTensor::full_shape() const {
  Shape s = shape_;
  if (codomain_) s.push_back(*codomain_);
  return s;
}

std::size_t CoefficientTensor::size() const noexcept {
  return product(shape_) * codomain_.value_or(1);
}

std::span<const double> CoefficientTensor::real_values() const {
  if (is_complex()) throw DomainError("tensor holds complex entries");
  return std::get<std::vector<double>>(data_);
}

std::span<const Complex> CoefficientTensor::complex_values() const {
  if (!is_complex()) throw DomainError("tensor holds real entries");
  return std::get<std::vector<Complex>>(data_);
}

std::vector<Complex> CoefficientTensor::as_complex() const {
  if (is_complex()) return std::get<std::vector<Complex>>(data_);
  const auto& re = std::get<std::vector<double>>(data_);
  return {re.begin(), re.end()};
}

std::vector<double> CoefficientTensor::magnitudes() const {
  return std::visit(
      [](const auto& v) {
        std::vector<double> out(v.size());
        std::transform(v.begin(), v.end(), out.begin(), [](const auto& x) { return std::abs(x); });
        return out;
      },
      data_);
}

Complex CoefficientTensor::at(std::span<const std::size_t> index) const {
  const Shape full = full_shape();
  if (index.size() != full.size()) throw DomainError("index has wrong rank");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    if (index[k] >= full[k]) throw DomainError("index out of range");
    flat = flat * full[k] + index[k];
  }
  return std::visit([flat](const auto& v) { return Complex(v[flat]); }, data_);
}

bool CoefficientTensor::is_zero() const {
  return std::visit(
      [](const auto& v) {
        return std::all_of(v.begin(), v.end(), [](const auto& x) { return x == std::decay_t<decltype(x)>{}; });
      },
      data_);
}

CoefficientTensor CoefficientTensor::scaled(double c) const {
  CoefficientTensor out = *this;
  std::visit(
      [c](auto& v) {
        for (auto& x : v) x *= c;
      },
      out.data_);
  out.validate();
  return out;
}

CoefficientTensor CoefficientTensor::without_codomain() const {
  if (!codomain_) throw DomainError("tensor has no codomain axis");
  CoefficientTensor out = *this;
  out.shape_.push_back(*codomain_);
  out.codomain_.reset();
  return out;
}

CoefficientTensor CoefficientTensor::with_trailing_codomain() const {
  if (codomain_) throw DomainError("tensor already has a codomain axis");
  if (shape_.size() < 2) throw DomainError("need at least two slots to split off a codomain");
  CoefficientTensor out = *this;
  out.codomain_ = out.shape_.back();
  out.shape_.pop_back();
  return out;
}

CoefficientTensor CoefficientTensor::permuted(std::span<const std::size_t> perm) const {
  const std::size_t m = shape_.size();
  if (perm.size() != m) throw DomainError("permutation has wrong length");
  std::vector<bool> seen(m, false);
  for (std::size_t a : perm) {
    if (a >= m || seen[a]) throw DomainError("not a permutation of the tensor axes");
    seen[a] = true;
  }

  const Shape full = full_shape();
  const std::size_t rank = full.size();
  std::vector<std::size_t> stride(rank, 1);
  for (std::size_t k = rank - 1; k > 0; --k) stride[k - 1] = stride[k] * full[k];

  Shape out_shape(m);
  std::vector<std::size_t> src_stride(rank);
  for (std::size_t k = 0; k < m; ++k) {
    out_shape[k] = shape_[perm[k]];
    src_stride[k] = stride[perm[k]];
  }
  Shape out_full = out_shape;
  if (codomain_) {
    out_full.push_back(*codomain_);
    src_stride[m] = 1;
  }

  return std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        std::vector<T> out(v.size());
        std::vector<std::size_t> idx(rank, 0);
        for (std::size_t flat = 0; flat < out.size(); ++flat) {
          std::size_t src = 0;
          for (std::size_t k = 0; k < rank; ++k) src += idx[k] * src_stride[k];
          out[flat] = v[src];
          for (std::size_t k = rank; k-- > 0;) {
            if (++idx[k] < out_full[k]) break;
            idx[k] = 0;
          }
        }
        return CoefficientTensor(out_shape, std::move(out), codomain_);
      },
      data_);
}

MixedNormSpec MixedNormSpec::identity(ExponentVector q, std::optional<double> codomain_q) {
  MixedNormSpec spec;
  spec.sigma.resize(q.size());
  std::iota(spec.sigma.begin(), spec.sigma.end(), std::size_t{0});
  spec.q = std::move(q);
  spec.codomain_q = codomain_q;
  return spec;
}

void MixedNormSpec::validate(std::size_t m) const {
  if (q.size() != m) {
    throw DomainError("mixed norm needs " + std::to_string(m) + " exponents, got " +
                      std::to_string(q.size()));
  }
  if (!q.all_finite()) throw DomainError("mixed norm exponents must be finite");
  if (sigma.size() != m) throw DomainError("permutation has wrong length");
  std::vector<bool> seen(m, false);
  for (std::size_t a : sigma) {
    if (a >= m || seen[a]) throw DomainError("sigma is not a permutation of {1, ..., m}");
    seen[a] = true;
  }
  if (codomain_q) {
    require_norm_exponent(*codomain_q, "codomain norm");
    if (*codomain_q == kInf) throw DomainError("codomain exponent must be finite");
  }
}

double lp_norm(std::span<const double> magnitudes, double p) {
  require_norm_exponent(p, "lp_norm");
  double scale = 0.0;
  for (double x : magnitudes) scale = std::max(scale, std::abs(x));
  if (scale == 0.0 || p == kInf) return scale;
  CompensatedSum sum;
  if (p == 1.0) {
    for (double x : magnitudes) sum.add(std::abs(x));
    return sum.value();
  }
  for (double x : magnitudes) sum.add(power(std::abs(x) / scale, p));
  const double s = sum.value();
  if (p == 2.0) return scale * std::sqrt(s);
  return scale * std::exp(std::log(s) / p);
}

double lp_norm(std::span<const Complex> values, double p) {
  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(),
                 [](const Complex& z) { return std::abs(z); });
  return lp_norm(mags, p);
}

double mixed_norm(const CoefficientTensor& t, const MixedNormSpec& spec) {
  const std::size_t m = t.arity();
  spec.validate(m);
  if (t.has_codomain() && !spec.codomain_q) {
    throw SpecError("tensor has a codomain axis but the spec has no codomain exponent");
  }

  std::vector<double> values = slot_magnitudes(t, spec.codomain_q);
  Shape shape = t.shape();
  // axes[j] = original slot currently stored at position j
  std::vector<std::size_t> axes(m);
  std::iota(axes.begin(), axes.end(), std::size_t{0});

  for (std::size_t level = m; level-- > 0;) {
    const auto pos = static_cast<std::size_t>(
        std::find(axes.begin(), axes.end(), spec.sigma[level]) - axes.begin());
    values = reduce_axis(values, shape, pos, spec.q[level]);
    axes.erase(axes.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  return values.front();
}

double uniform_norm_tensor(const CoefficientTensor& t, std::size_t k, double lambda,
                           std::optional<double> codomain_q) {
  const std::size_t m = t.arity();
  if (k >= m) throw DomainError("position k out of range");
  require_norm_exponent(lambda, "uniform_norm_tensor");
  std::vector<double> q(m, 2.0);
  q[0] = lambda;
  MixedNormSpec spec;
  spec.q = ExponentVector(std::move(q));
  spec.sigma.push_back(k);
  for (std::size_t a = 0; a < m; ++a) {
    if (a != k) spec.sigma.push_back(a);
  }
  spec.codomain_q = codomain_q;
  if (t.has_codomain() && !spec.codomain_q) spec.codomain_q = 2.0;
  return mixed_norm(t, spec);
}

double minkowski_exchange_gap(const CoefficientTensor& t, double a, double b,
                              std::pair<std::size_t, std::size_t> axes) {
  require_norm_exponent(a, "minkowski_exchange_gap");
  require_norm_exponent(b, "minkowski_exchange_gap");
  if (a > b) throw DomainError("Minkowski exchange needs a <= b");
  const std::size_t m = t.arity();
  const auto [first, second] = axes;
  if (first >= m || second >= m || first == second) {
    throw DomainError("exchange axes must be two distinct slots");
  }

  std::vector<std::size_t> perm{first, second};
  for (std::size_t k = 0; k < m; ++k) {
    if (k != first && k != second) perm.push_back(k);
  }
  const CoefficientTensor arranged = t.permuted(perm);
  const auto mags = arranged.magnitudes();
  const std::size_t rows = t.dim(first);
  const std::size_t cols = t.dim(second);
  const std::size_t rest = mags.size() / (rows * cols);

  // c[i][j] = l_2 norm of everything else at (i, j)
  std::vector<double> c(rows * cols);
  for (std::size_t ij = 0; ij < rows * cols; ++ij) {
    c[ij] = lp_norm(std::span<const double>(mags).subspan(ij * rest, rest), 2.0);
  }

  std::vector<double> buf(std::max(rows, cols));
  std::vector<double> outer_rows(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    outer_rows[i] = lp_norm(std::span<const double>(c).subspan(i * cols, cols), a);
  }
  const double b_outside = lp_norm(outer_rows, b);

  std::vector<double> outer_cols(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows; ++i) buf[i] = c[i * cols + j];
    outer_cols[j] = lp_norm(std::span<const double>(buf).first(rows), b);
  }
  const double a_outside = lp_norm(outer_cols, a);
  return b_outside - a_outside;
}

}  // namespace mixnorm
