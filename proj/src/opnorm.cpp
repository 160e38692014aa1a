#include "mixnorm/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "contraction.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/random.hpp"

namespace mixnorm {

namespace {

template <class S>
double magnitude(const S& x) {
  return std::abs(x);
}

template <class S>
std::vector<S> dual_maximizer_impl(std::span<const S> g, double p) {
  if (p < 1.0 || std::isnan(p)) throw DomainError("dual_maximizer: exponent below 1");
  const std::size_t n = g.size();
  double scale = 0.0;
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = magnitude(g[i]);
    if (a > scale) {
      scale = a;
      argmax = i;
    }
  }
  if (scale == 0.0) throw DegenerateGradientError("dual_maximizer: zero functional");

  // unit-modulus factor u with g * u = |g|
  auto align = [](const S& z) -> S {
    const double a = magnitude(z);
    if (a == 0.0) return S{1};
    if constexpr (std::is_same_v<S, double>) {
      return z > 0.0 ? 1.0 : -1.0;
    } else {
      return std::conj(z) / a;
    }
  };

  std::vector<S> x(n, S{});
  if (p == 1.0) {
    x[argmax] = align(g[argmax]);
    return x;
  }
  if (p == kInf) {
    for (std::size_t i = 0; i < n; ++i) x[i] = align(g[i]);
    return x;
  }
  // x_i = u_i |g_i|^{p*-1} / ||g||_{p*}^{p*-1}, computed on g / max|g|
  const double pstar = conjugate_exponent(p);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = magnitude(g[i]) / scale;
    w[i] = a == 0.0 ? 0.0 : std::pow(a, pstar - 1.0);
  }
  const double norm = lp_norm(w, p);
  for (std::size_t i = 0; i < n; ++i) x[i] = align(g[i]) * (w[i] / norm);
  return x;
}

template <class S>
void sample_on_sphere(std::vector<S>& x, double p, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> radius(x.size());
  if (p == kInf) {
    for (double& r : radius) r = uniform(gen);
  } else {
    // generalized Gaussian magnitudes, density ~ exp(-t^p)
    std::gamma_distribution<double> gamma(1.0 / p, 1.0);
    for (double& r : radius) r = std::pow(gamma(gen), 1.0 / p);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if constexpr (std::is_same_v<S, double>) {
      x[i] = uniform(gen) < 0.5 ? -radius[i] : radius[i];
    } else {
      x[i] = std::polar(radius[i], 2.0 * M_PI * uniform(gen));
    }
  }
  double norm = lp_norm(std::span<const double>(radius), p);
  if (norm == 0.0) {
    x.assign(x.size(), S{});
    x[0] = S{1};
    return;
  }
  for (auto& v : x) v /= norm;
}

struct RestartResult {
  double value = -1.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<std::vector<Complex>> witness;
};

template <class S>
RestartResult run_restart(const std::vector<S>& values, const Shape& shape,
                          std::span<const double> p, const AscentOptions& options,
                          std::uint64_t seed) {
  const std::size_t m = shape.size();
  std::mt19937_64 gen(seed);
  std::vector<std::vector<S>> x(m);
  for (std::size_t k = 0; k < m; ++k) {
    x[k].resize(shape[k]);
    sample_on_sphere(x[k], p[k], gen);
  }

  std::vector<S> g;
  std::vector<S> scratch;
  RestartResult out;
  double value = 0.0;
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    double sweep_value = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      detail::contract_except(values, shape, x, k, g, scratch);
      bool zero = true;
      for (const S& v : g) zero = zero && v == S{};
      if (zero) {
        sweep_value = 0.0;
        continue;
      }
      x[k] = dual_maximizer_impl<S>(g, p[k]);
      S acc{};
      for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * x[k][i];
      sweep_value = magnitude(acc);
    }
    out.iterations = it;
    const bool stalled = sweep_value - value <= options.tol * std::max(sweep_value, 1e-300);
    value = std::max(value, sweep_value);
    if (stalled) {
      out.converged = true;
      break;
    }
  }
  out.value = value;
  out.witness.resize(m);
  for (std::size_t k = 0; k < m; ++k) out.witness[k].assign(x[k].begin(), x[k].end());
  return out;
}

template <class S>
std::vector<S> evaluate_impl(const MultilinearForm& form, const std::vector<std::vector<S>>& args) {
  form.validate();
  const std::size_t m = form.arity();
  if (args.size() != m) {
    throw DomainError("evaluate: expected " + std::to_string(m) + " arguments, got " +
                      std::to_string(args.size()));
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (args[k].size() != form.tensor.dim(k)) {
      throw DomainError("evaluate: argument " + std::to_string(k + 1) + " has length " +
                        std::to_string(args[k].size()) + ", expected " +
                        std::to_string(form.tensor.dim(k)));
    }
  }
  const auto values = detail::tensor_values<S>(form.tensor);
  std::vector<S> out;
  std::vector<S> scratch;
  if (form.vector_valued()) {
    Shape shape = form.tensor.full_shape();
    auto x = args;
    x.emplace_back();
    detail::contract_except(values, shape, x, m, out, scratch);
    return out;
  }
  std::vector<S> g;
  detail::contract_except(values, form.tensor.shape(), args, m - 1, g, scratch);
  S acc{};
  for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * args[m - 1][i];
  return {acc};
}

}  // namespace

void MultilinearForm::validate() const {
  if (p.size() != tensor.arity()) {
    throw DomainError("form has " + std::to_string(tensor.arity()) + " slots but " +
                      std::to_string(p.size()) + " domain exponents");
  }
  if (tensor.has_codomain() != codomain_s.has_value()) {
    throw SpecError("codomain exponent must be given exactly when the tensor has a codomain axis");
  }
  if (codomain_s && (*codomain_s < 1.0 || *codomain_s == kInf)) {
    throw DomainError("codomain exponent s must lie in [1, inf)");
  }
}

std::string to_string(NormKind kind) { return kind == NormKind::exact ? "exact" : "lower_bound"; }

std::vector<double> evaluate(const MultilinearForm& form,
                             const std::vector<std::vector<double>>& args) {
  if (form.tensor.is_complex()) throw DomainError("evaluate: complex tensor needs evaluate_complex");
  return evaluate_impl<double>(form, args);
}

std::vector<Complex> evaluate_complex(const MultilinearForm& form,
                                      const std::vector<std::vector<Complex>>& args) {
  return evaluate_impl<Complex>(form, args);
}

double value_at(const MultilinearForm& form, const std::vector<std::vector<Complex>>& args) {
  const auto y = evaluate_complex(form, args);
  if (!form.vector_valued()) return std::abs(y.front());
  return lp_norm(std::span<const Complex>(y), *form.codomain_s);
}

std::vector<double> dual_maximizer(std::span<const double> g, double p) {
  return dual_maximizer_impl<double>(g, p);
}

std::vector<Complex> dual_maximizer(std::span<const Complex> g, double p) {
  return dual_maximizer_impl<Complex>(g, p);
}

double dual_norm(std::span<const double> g, double p) {
  return lp_norm(g, conjugate_exponent(p));
}

NormEstimate alternating_ascent(const MultilinearForm& form, const AscentOptions& options) {
  form.validate();
  if (options.restarts == 0) throw DomainError("alternating_ascent needs at least one restart");
  if (options.max_iters == 0) throw DomainError("alternating_ascent needs max_iters >= 1");
  const MultilinearForm flat = detail::scalar_view(form);
  const Shape& shape = flat.tensor.shape();
  const bool complex_args = flat.uses_complex_arguments();

  std::vector<RestartResult> results(options.restarts);
  if (complex_args) {
    const auto values = detail::tensor_values<Complex>(flat.tensor);
    parallel_for(options.restarts, [&](std::size_t r) {
      results[r] = run_restart<Complex>(values, shape, flat.p.values(), options,
                                        rng::derive(options.seed, r));
    });
  } else {
    const auto values = detail::tensor_values<double>(flat.tensor);
    parallel_for(options.restarts, [&](std::size_t r) {
      results[r] = run_restart<double>(values, shape, flat.p.values(), options,
                                       rng::derive(options.seed, r));
    });
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].value > results[best].value) best = r;
  }
  NormEstimate est;
  est.kind = NormKind::lower_bound;
  est.witness = std::move(results[best].witness);
  est.witness.resize(form.arity());  // drop the codomain dual, if any
  est.value = value_at(form, est.witness);
  est.iterations = results[best].iterations;
  est.restarts_used = options.restarts;
  est.converged = results[best].converged;
  return est;
}

NormMethod norm_method_from_string(const std::string& s) {
  if (s == "auto") return NormMethod::automatic;
  if (s == "oracle") return NormMethod::oracle;
  if (s == "ascent") return NormMethod::ascent;
  throw ParseError("unknown norm method '" + s + "' (expected auto, oracle or ascent)");
}

NormEstimate estimate_norm(const MultilinearForm& form, NormMethod method,
                           const AscentOptions& options, double budget) {
  switch (method) {
    case NormMethod::oracle:
      return exact_sign_enumeration(form, budget);
    case NormMethod::ascent:
      return alternating_ascent(form, options);
    case NormMethod::automatic:
      break;
  }
  if (oracle_applicable(form, budget)) return exact_sign_enumeration(form, budget);
  return alternating_ascent(form, options);
}

double ratio(const MultilinearForm& form, const MixedNormSpec& spec, const NormEstimate& norm) {
  if (!(norm.value > 0.0)) throw DegenerateFormError("ratio: the form has zero norm");
  return mixed_norm(form.tensor, spec) / norm.value;
}

}  // namespace mixnorm
