#include "mixnorm/constructions.hpp"

#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "mixnorm/errors.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/parse.hpp"
#include "mixnorm/random.hpp"

namespace mixnorm {

namespace {

// Stream tag keeping sign tensors apart from other seeded draws.
constexpr std::uint64_t kSignStream = 0x5158a1d3ULL;

void require_positive(std::size_t v, const char* what) {
  if (v == 0) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

CoefficientTensor random_sign_tensor(const Shape& shape, std::uint64_t seed, std::uint64_t trial,
                                     Field field) {
  const std::size_t size =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  const std::uint64_t key = rng::derive(seed, kSignStream, trial);
  if (field == Field::complex) {
    std::vector<Complex> z(size);
    for (std::size_t i = 0; i < size; ++i) z[i] = rng::unimodular(key, trial, i);
    return CoefficientTensor(shape, std::move(z));
  }
  std::vector<double> v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = rng::sign(key, trial, i);
  return CoefficientTensor(shape, std::move(v));
}

KszForm ksz_random(std::size_t m, std::size_t n, const ExponentVector& p, std::uint64_t seed,
                   const KszOptions& options) {
  require_positive(m, "arity m");
  require_positive(n, "dimension n");
  require_positive(options.trials, "trials");
  if (p.size() != m) throw DomainError("ksz_random: p must have length m");

  const Shape shape(m, n);
  std::vector<MultilinearForm> forms(options.trials);
  std::vector<NormEstimate> norms(options.trials);
  parallel_for(options.trials, [&](std::size_t t) {
    MultilinearForm f;
    f.tensor = random_sign_tensor(shape, seed, t, options.field);
    f.p = p;
    f.field = options.field;
    AscentOptions ascent = options.ascent;
    ascent.seed = rng::derive(seed, 0xa5cULL, t);
    norms[t] = estimate_norm(f, NormMethod::automatic, ascent, options.budget);
    forms[t] = std::move(f);
  });

  std::size_t best = 0;
  for (std::size_t t = 1; t < options.trials; ++t) {
    if (norms[t].value < norms[best].value) best = t;
  }
  KszForm out;
  out.form = std::move(forms[best]);
  out.norm = std::move(norms[best]);
  out.trials_used = options.trials;
  out.seed = seed;
  out.predicted_norm_exponent = 0.5;
  for (std::size_t k = 0; k < m; ++k) out.predicted_norm_exponent += ksz_alpha(p[k]);
  return out;
}

KszForm ksz_vector(std::size_t d, std::size_t n, const ExponentVector& p, double s,
                   std::uint64_t seed, const KszOptions& options) {
  if (!(s >= 1.0) || s == kInf) throw DomainError("ksz_vector: s must lie in [1, inf)");
  if (p.size() != d) throw DomainError("ksz_vector: p must have length d");
  std::vector<double> extended(p.values().begin(), p.values().end());
  const double s_star = conjugate_exponent(s);
  extended.push_back(s_star);
  KszForm scalar = ksz_random(d + 1, n, ExponentVector(std::move(extended)), seed, options);

  KszForm out;
  out.form = unflatten_scalar_form(scalar.form, s);
  out.norm = std::move(scalar.norm);
  out.norm.witness.resize(d);
  out.norm.value = value_at(out.form, out.norm.witness);
  out.trials_used = scalar.trials_used;
  out.seed = seed;
  // same as the scalar exponent: the extra slot contributes alpha(s*)
  out.predicted_norm_exponent = scalar.predicted_norm_exponent;
  return out;
}

MultilinearForm flatten_vector_form(const MultilinearForm& form) {
  form.validate();
  if (!form.vector_valued()) throw DomainError("flatten_vector_form: form has no codomain axis");
  MultilinearForm flat;
  flat.tensor = form.tensor.without_codomain();
  std::vector<double> p(form.p.values().begin(), form.p.values().end());
  p.push_back(conjugate_exponent(*form.codomain_s));
  flat.p = ExponentVector(std::move(p));
  flat.field = form.field;
  return flat;
}

MultilinearForm unflatten_scalar_form(const MultilinearForm& form, double s) {
  form.validate();
  if (form.vector_valued()) throw DomainError("unflatten_scalar_form: form is already vector-valued");
  if (form.arity() < 2) throw DomainError("unflatten_scalar_form: need at least two slots");
  if (!(s >= 1.0) || s == kInf) throw DomainError("unflatten_scalar_form: s must lie in [1, inf)");
  MultilinearForm out;
  out.tensor = form.tensor.with_trailing_codomain();
  out.p = ExponentVector(std::vector<double>(form.p.values().begin(), form.p.values().end() - 1));
  out.codomain_s = s;
  out.field = form.field;
  return out;
}

MultilinearForm littlewood_extremizer() {
  MultilinearForm f;
  f.tensor = CoefficientTensor({2, 2}, std::vector<double>{1.0, 1.0, 1.0, -1.0});
  f.p = ExponentVector{kInf, kInf};
  return f;
}

MultilinearForm degenerate_counterexample(std::size_t m, std::size_t n, const ExponentVector& p,
                                          std::uint64_t seed, const KszOptions& options) {
  if (m < 2) throw DomainError("degenerate_counterexample needs m >= 2");
  if (p.size() != m) throw DomainError("degenerate_counterexample: p must have length m");
  const ExponentVector head(std::vector<double>(p.values().begin(), p.values().end() - 1));
  const KszForm f = ksz_random(m - 1, n, head, seed, options);

  const auto fv = f.form.tensor.as_complex();
  const bool complex = f.form.tensor.is_complex();
  const std::size_t slice = fv.size();
  std::vector<double> re(slice * n, 0.0);
  std::vector<Complex> z(complex ? slice * n : 0);
  // row-major with i_m last: entry (i_1..i_{m-1}, 0) sits at flat * n
  for (std::size_t i = 0; i < slice; ++i) {
    if (complex) {
      z[i * n] = fv[i];
    } else {
      re[i * n] = fv[i].real();
    }
  }
  MultilinearForm a;
  a.tensor = complex ? CoefficientTensor(Shape(m, n), std::move(z))
                     : CoefficientTensor(Shape(m, n), std::move(re));
  a.p = p;
  a.field = options.field;
  return a;
}

void write_form(std::ostream& os, const MultilinearForm& form, std::optional<std::uint64_t> seed) {
  form.validate();
  os << "p: " << format_exponent_list(form.p.values(), " ") << '\n';
  if (form.codomain_s) os << "codomain_s: " << format_exponent(*form.codomain_s) << '\n';
  if (form.field == Field::complex) os << "field: complex\n";
  if (seed) os << "seed: " << *seed << '\n';
  write_tensor(os, form.tensor);
}

MultilinearForm read_form(std::istream& is) {
  TensorFileHeader header;
  MultilinearForm form;
  form.tensor = read_tensor(is, header);
  if (const auto* p = header.find("p")) {
    form.p = parse_exponent_list(*p);
  } else {
    form.p = ExponentVector::uniform(form.tensor.arity(), kInf);
  }
  if (const auto* s = header.find("codomain_s")) {
    form.codomain_s = parse_exponent(*s);
  } else if (form.tensor.has_codomain()) {
    form.codomain_s = 1.0;
  }
  if (const auto* f = header.find("field")) form.field = field_from_string(*f);
  try {
    form.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("form file: ") + e.what());
  }
  return form;
}

}  // namespace mixnorm
