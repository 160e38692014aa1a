#include "mixnorm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <utility>

#include "mixnorm/constructions.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/parallel.hpp"
#include "mixnorm/parse.hpp"
#include "mixnorm/random.hpp"

namespace mixnorm {

namespace {

constexpr std::uint64_t kFormStream = 0x7e57f0a3ULL;
constexpr std::uint64_t kAscentStream = 0xa5cULL;

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ExperimentKind::verify_upper, "verify_upper"},
    {ExperimentKind::sharpness_growth, "sharpness_growth"},
    {ExperimentKind::bilinear_sharp, "bilinear_sharp"},
    {ExperimentKind::mixed_l2_check, "mixed_l2_check"},
    {ExperimentKind::counterexample_growth, "counterexample_growth"},
};

bool is_growth(ExperimentKind kind) {
  return kind == ExperimentKind::sharpness_growth || kind == ExperimentKind::counterexample_growth;
}

AscentOptions ascent_for(const ExperimentConfig& c, std::uint64_t seed) {
  AscentOptions a;
  a.restarts = c.restarts;
  a.seed = rng::derive(seed, kAscentStream);
  return a;
}

KszOptions ksz_options(const ExperimentConfig& c) {
  KszOptions o;
  o.trials = c.trials;
  o.field = c.field;
  o.ascent.restarts = c.restarts;
  return o;
}

ExperimentRecord make_record(std::size_t n, double mixed, const NormEstimate& norm,
                             std::uint64_t seed, const std::string& digest) {
  if (!(norm.value > 0.0)) throw DegenerateFormError("norm estimate is zero");
  ExperimentRecord r;
  r.n = n;
  r.mixed_norm = mixed;
  r.norm_estimate = norm.value;
  r.norm_kind = norm.kind;
  r.ratio = mixed / norm.value;
  r.seed = seed;
  r.config_digest = digest;
  return r;
}

// Fills the ratio tallies of a bound check; only exact norms count as violations.
void tally_bound(ExperimentReport& rep, double bound) {
  rep.bound = bound;
  rep.max_ratio = 0.0;
  rep.max_certified_ratio = 0.0;
  rep.certified = 0;
  rep.violations = 0;
  for (const auto& r : rep.records) {
    rep.max_ratio = std::max(rep.max_ratio, r.ratio);
    if (r.norm_kind != NormKind::exact) continue;
    ++rep.certified;
    rep.max_certified_ratio = std::max(rep.max_certified_ratio, r.ratio);
    if (r.ratio > bound + kBoundSlack) ++rep.violations;
  }
}

std::string bound_headline(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "max_ratio=" << format_number(rep.max_ratio) << " bound=" << format_number(*rep.bound)
     << " certified=" << rep.certified << '/' << rep.records.size()
     << " violations=" << rep.violations;
  return os.str();
}

std::string growth_headline(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "slope=" << format_number(rep.fit->slope)
     << " predicted=" << format_number(rep.fit->predicted_slope)
     << " stderr=" << format_number(rep.fit->std_error);
  if (rep.certified_fit) os << " certified_slope=" << format_number(rep.certified_fit->slope);
  if (rep.exact_claim_failures) os << " exact_claim_failures=" << rep.exact_claim_failures;
  return os.str();
}

void fit_growth(ExperimentReport& rep, double predicted) {
  rep.fit = growth_fit(rep.records, predicted);
  std::vector<ExperimentRecord> exact;
  for (const auto& r : rep.records) {
    if (r.norm_kind == NormKind::exact) exact.push_back(r);
  }
  rep.certified = exact.size();
  rep.max_ratio = 0.0;
  for (const auto& r : rep.records) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  std::vector<std::size_t> ns;
  for (const auto& r : exact) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (exact.size() >= 3 && ns.size() >= 2) rep.certified_fit = growth_fit(exact, predicted);
  rep.verdict = std::abs(rep.fit->slope - predicted) <= kSlopeTol && rep.exact_claim_failures == 0;
  rep.headline = growth_headline(rep);
}

bool relatively_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(b), 1.0);
}

// Draws `trials` random forms at each n and measures them with `measure`,
// which returns the left-hand side for a form.
template <class Measure>
std::vector<ExperimentRecord> random_form_records(const ExperimentConfig& c, const ExponentVector& p,
                                                  Measure measure) {
  const std::string digest = c.digest();
  const auto grid = c.grid();
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t n : grid) {
    for (std::size_t i = 0; i < c.trials; ++i) jobs.emplace_back(n, i);
  }
  std::vector<ExperimentRecord> out(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const auto [n, i] = jobs[j];
    const std::uint64_t seed = rng::derive(c.seed, n, i);
    MultilinearForm f;
    std::optional<std::size_t> codomain;
    if (c.vector_valued) {
      codomain = n;
      f.codomain_s = c.s;
    }
    f.tensor = random_test_tensor(Shape(c.m, n), seed, i, c.field, codomain);
    f.p = p;
    f.field = c.field;
    const NormEstimate norm = estimate_norm(f, NormMethod::automatic, ascent_for(c, seed));
    out[j] = make_record(n, measure(f), norm, seed, digest);
  });
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
  std::string norm = s;
  std::replace(norm.begin(), norm.end(), '-', '_');
  for (const auto& k : kKindNames) {
    if (norm == k.name) return k.kind;
  }
  throw ConfigError("unknown experiment kind '" + s + "'");
}

ExponentVector ExperimentConfig::domain() const {
  return p ? *p : ExponentVector::uniform(m, kInf);
}

ProblemSpec ExperimentConfig::problem() const {
  ProblemSpec spec;
  spec.m = m;
  spec.p = domain();
  spec.s = s;
  spec.q_cod = q_cod;
  spec.field = field;
  return spec;
}

std::vector<std::size_t> ExperimentConfig::grid() const {
  if (!n_values.empty()) return n_values;
  std::vector<std::size_t> g;
  switch (kind) {
    case ExperimentKind::sharpness_growth:
    case ExperimentKind::counterexample_growth:
      return {4, 8, 16, 32, 64};
    case ExperimentKind::bilinear_sharp:
      for (std::size_t n = 2; n <= 12; ++n) g.push_back(n);
      return g;
    default: {
      // keep the enumerated slots within 24 sign bits
      const std::size_t cap = m <= 1 ? 8 : std::min<std::size_t>(8, 24 / (m - 1));
      for (std::size_t n = 2; n <= cap; ++n) g.push_back(n);
      return g;
    }
  }
}

void ExperimentConfig::validate() const {
  try {
    problem().validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (q && q->size() != m) throw ConfigError("q must have length m");
  if (trials == 0) throw ConfigError("trials must be positive");
  if (restarts == 0) throw ConfigError("restarts must be positive");
  for (std::size_t i = 1; i < n_values.size(); ++i) {
    if (n_values[i] <= n_values[i - 1]) throw ConfigError("n_values must be strictly increasing");
  }
  if (is_growth(kind) && grid().size() < 3) {
    throw ConfigError("growth fits need at least 3 n values");
  }
  const bool needs_q = kind == ExperimentKind::verify_upper ||
                       kind == ExperimentKind::sharpness_growth ||
                       kind == ExperimentKind::bilinear_sharp;
  if (needs_q && !q) throw ConfigError(to_string(kind) + " requires q");
  if (vector_valued && kind != ExperimentKind::sharpness_growth &&
      kind != ExperimentKind::verify_upper) {
    throw ConfigError("vector_valued applies to verify_upper and sharpness_growth only");
  }
  if (vector_valued && s == kInf) throw ConfigError("vector_valued needs finite s");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os << "kind = " << to_string(kind) << '\n'
     << "m = " << m << '\n'
     << "s = " << format_exponent(s) << '\n'
     << "q_cod = " << format_exponent(q_cod) << '\n'
     << "p = " << format_exponent_list(domain().values()) << '\n';
  if (q) os << "q = " << format_exponent_list(q->values()) << '\n';
  os << "n_values = ";
  const auto g = grid();
  for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
  os << '\n'
     << "seed = " << seed << '\n'
     << "trials = " << trials << '\n'
     << "restarts = " << restarts << '\n'
     << "field = " << to_string(field) << '\n'
     << "vector_valued = " << (vector_valued ? "true" : "false") << '\n';
  return os.str();
}

std::string ExperimentConfig::digest() const {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

GrowthFit growth_fit(std::span<const ExperimentRecord> records, double predicted_slope) {
  if (records.size() < 3) throw DataError("growth_fit needs at least 3 records");
  const double count = static_cast<double>(records.size());
  double mx = 0.0, my = 0.0;
  for (const auto& r : records) {
    if (!(r.ratio > 0.0) || !std::isfinite(r.ratio)) {
      throw DataError("growth_fit: nonpositive ratio at n=" + std::to_string(r.n));
    }
    if (r.n == 0) throw DataError("growth_fit: n must be positive");
    mx += std::log(static_cast<double>(r.n));
    my += std::log(r.ratio);
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& r : records) {
    const double dx = std::log(static_cast<double>(r.n)) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(r.ratio) - my);
  }
  if (sxx == 0.0) throw DataError("growth_fit needs at least two distinct n");
  GrowthFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.predicted_slope = predicted_slope;
  double ssr = 0.0;
  for (const auto& r : records) {
    const double e =
        std::log(r.ratio) - fit.intercept - fit.slope * std::log(static_cast<double>(r.n));
    ssr += e * e;
  }
  fit.std_error = records.size() > 2 ? std::sqrt(ssr / (count - 2.0) / sxx) : 0.0;
  return fit;
}

CoefficientTensor random_test_tensor(const Shape& shape, std::uint64_t seed, std::uint64_t index,
                                     Field field, std::optional<std::size_t> codomain) {
  std::size_t size = codomain.value_or(1);
  for (std::size_t d : shape) size *= d;
  const std::uint64_t key = rng::derive(seed, kFormStream, index);
  std::mt19937_64 gen(key);
  std::normal_distribution<double> gauss;
  const auto variant = index % 3;

  auto draw = [&](std::size_t i) -> Complex {
    if (variant == 0) {
      const double re = gauss(gen);
      return field == Field::complex ? Complex(re, gauss(gen)) : Complex(re, 0.0);
    }
    if (variant == 2 && (rng::hash(key, 1, i) & 1U)) return {0.0, 0.0};
    return field == Field::complex ? rng::unimodular(key, 2, i)
                                   : Complex(rng::sign(key, 2, i), 0.0);
  };

  if (field == Field::complex) {
    std::vector<Complex> z(size);
    for (std::size_t i = 0; i < size; ++i) z[i] = draw(i);
    if (std::all_of(z.begin(), z.end(), [](Complex v) { return v == Complex{}; })) z[0] = 1.0;
    return CoefficientTensor(shape, std::move(z), codomain);
  }
  std::vector<double> v(size);
  for (std::size_t i = 0; i < size; ++i) v[i] = draw(i).real();
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) v[0] = 1.0;
  return CoefficientTensor(shape, std::move(v), codomain);
}

ExperimentReport run_verify_upper(const ExperimentConfig& c) {
  c.validate();
  const ProblemSpec spec = c.problem();
  const ExponentVector& q = *c.q;
  const Feasibility feas = feasibility(q, spec);
  if (!feas.feasible) {
    throw RefusedError("q is infeasible (slack " + format_number(feas.slack) + ")");
  }
  const ConstantSpec consts = ConstantSpec::defaults(c.field);
  const bool c0_scalar = !c.vector_valued && spec.s == 1.0 && spec.q_cod == 2.0 &&
                         spec.p.reciprocal_sum() == 0.0;
  const double bound = c0_scalar ? interpolated_constant(q, spec, consts)
                                 : constant_bounds(c.m, c.field, consts).mixed_upper;

  const MixedNormSpec mspec =
      MixedNormSpec::identity(q, c.vector_valued ? std::optional<double>(c.q_cod) : std::nullopt);
  ExperimentReport rep;
  rep.config = c;
  rep.records = random_form_records(
      c, spec.p, [&](const MultilinearForm& f) { return mixed_norm(f.tensor, mspec); });
  tally_bound(rep, bound);
  rep.verdict = rep.violations == 0;
  rep.headline = bound_headline(rep);
  return rep;
}

ExperimentReport run_sharpness_growth(const ExperimentConfig& c) {
  c.validate();
  const ExponentVector p = c.domain();
  const ExponentVector& q = *c.q;
  const std::string digest = c.digest();
  const auto grid = c.grid();
  const KszOptions opts = ksz_options(c);
  const double mixed_exponent = q.reciprocal_sum() + (c.vector_valued ? 1.0 / c.q_cod : 0.0);
  const MixedNormSpec mspec =
      MixedNormSpec::identity(q, c.vector_valued ? std::optional<double>(c.q_cod) : std::nullopt);

  ExperimentReport rep;
  rep.config = c;
  rep.records.resize(grid.size());
  std::vector<double> norm_exponent(grid.size());
  std::vector<char> exact_ok(grid.size());
  parallel_for(grid.size(), [&](std::size_t j) {
    const std::size_t n = grid[j];
    const std::uint64_t seed = rng::derive(c.seed, n);
    const KszForm k = c.vector_valued ? ksz_vector(c.m, n, p, c.s, seed, opts)
                                      : ksz_random(c.m, n, p, seed, opts);
    const double mixed = mixed_norm(k.form.tensor, mspec);
    const double expected = std::pow(static_cast<double>(n), mixed_exponent);
    exact_ok[j] = relatively_close(mixed, expected, kExactClaimTol) ? 1 : 0;
    norm_exponent[j] = k.predicted_norm_exponent;
    rep.records[j] = make_record(n, mixed, k.norm, seed, digest);
  });
  for (char ok : exact_ok) rep.exact_claim_failures += ok ? 0 : 1;
  fit_growth(rep, mixed_exponent - norm_exponent.front());
  return rep;
}

ExperimentReport run_bilinear_sharp(const ExperimentConfig& c) {
  c.validate();
  if (c.m != 2) throw ConfigError("bilinear_sharp needs m = 2");
  if (c.field != Field::real) throw ConfigError("bilinear_sharp is defined for real scalars");
  const double p1 = (*c.q)[0], p2 = (*c.q)[1];
  double bound = 0.0;
  try {
    bound = bilinear_sharp_constant(p1, p2);
  } catch (const InfeasibleSpecError& e) {
    throw RefusedError(e.what());
  }
  const std::string digest = c.digest();
  const MixedNormSpec mspec = MixedNormSpec::identity(*c.q);

  ExperimentReport rep;
  rep.config = c;
  const MultilinearForm ext = littlewood_extremizer();
  const NormEstimate ext_norm = exact_sign_enumeration(ext);
  const ExperimentRecord ext_rec =
      make_record(2, mixed_norm(ext.tensor, mspec), ext_norm, c.seed, digest);
  if (std::abs(ext_rec.ratio - bound) > kExtremizerTol) rep.exact_claim_failures = 1;

  auto sweep = random_form_records(
      c, c.domain(), [&](const MultilinearForm& f) { return mixed_norm(f.tensor, mspec); });
  rep.records.reserve(sweep.size() + 1);
  rep.records.push_back(ext_rec);
  for (auto& r : sweep) rep.records.push_back(std::move(r));
  tally_bound(rep, bound);
  rep.verdict = rep.violations == 0 && rep.exact_claim_failures == 0;
  rep.headline = "extremizer_ratio=" + format_number(ext_rec.ratio) + " " + bound_headline(rep);
  return rep;
}

ExperimentReport run_mixed_l2_check(const ExperimentConfig& c) {
  c.validate();
  const ExponentVector p = c.domain();
  const double inv_sum = p.reciprocal_sum();
  std::optional<std::size_t> violating;
  for (std::size_t l = 0; l < c.m && !violating; ++l) {
    if (inv_sum - reciprocal(p[l]) > 0.5 + kExponentTol) violating = l;
  }
  if (violating) {
    // side condition fails: demonstrate the blow-up instead
    ExperimentConfig ce = c;
    ce.kind = ExperimentKind::counterexample_growth;
    std::vector<double> perm(p.values().begin(), p.values().end());
    std::swap(perm[*violating], perm.back());
    ce.p = ExponentVector(std::move(perm));
    if (c.n_values.empty()) ce.n_values = ce.grid();
    ExperimentReport rep = run_counterexample_growth(ce);
    const std::string digest = c.digest();
    for (auto& r : rep.records) r.config_digest = digest;
    rep.config = c;
    rep.mode = "expect_failure";
    return rep;
  }
  if (!(inv_sum < 1.0 - kExponentTol)) {
    throw RefusedError("mixed l2 check needs |1/p| < 1 (got " + format_number(inv_sum) + ")");
  }
  const double lambda = 1.0 / (1.0 - inv_sum);
  const double bound = constant_bounds(c.m, c.field, ConstantSpec::defaults(c.field)).mixed_upper;

  ExperimentReport rep;
  rep.config = c;
  rep.records = random_form_records(c, p, [&](const MultilinearForm& f) {
    double worst = 0.0;
    for (std::size_t k = 0; k < c.m; ++k) {
      worst = std::max(worst, uniform_norm_tensor(f.tensor, k, lambda));
    }
    return worst;
  });
  tally_bound(rep, bound);
  rep.verdict = rep.violations == 0;
  rep.headline = "lambda=" + format_number(lambda) + " " + bound_headline(rep);
  return rep;
}

ExperimentReport run_counterexample_growth(const ExperimentConfig& c) {
  c.validate();
  if (c.m < 2) throw RefusedError("counterexample needs m >= 2");
  const ExponentVector p = c.domain();
  const double head = p.reciprocal_sum() - reciprocal(p[c.m - 1]);
  if (!(head > 0.5 + kExponentTol)) {
    throw RefusedError("side condition holds (sum of 1/p_k over the first m-1 slots is " +
                       format_number(head) + " <= 1/2); nothing to falsify");
  }
  const std::string digest = c.digest();
  const auto grid = c.grid();
  const KszOptions opts = ksz_options(c);

  ExperimentReport rep;
  rep.config = c;
  rep.records.resize(grid.size());
  std::vector<char> exact_ok(grid.size());
  parallel_for(grid.size(), [&](std::size_t j) {
    const std::size_t n = grid[j];
    const std::uint64_t seed = rng::derive(c.seed, n);
    const MultilinearForm a = degenerate_counterexample(c.m, n, p, seed, opts);
    // any outer exponent gives the same value: only one slice is nonzero
    const double lhs = uniform_norm_tensor(a.tensor, c.m - 1, 1.0);
    const double expected = std::pow(static_cast<double>(n), 0.5 * static_cast<double>(c.m - 1));
    exact_ok[j] = relatively_close(lhs, expected, kExactClaimTol) ? 1 : 0;
    const NormEstimate norm = estimate_norm(a, NormMethod::automatic, ascent_for(c, seed));
    rep.records[j] = make_record(n, lhs, norm, seed, digest);
  });
  for (char ok : exact_ok) rep.exact_claim_failures += ok ? 0 : 1;
  fit_growth(rep, head - 0.5);
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::verify_upper: return run_verify_upper(config);
    case ExperimentKind::sharpness_growth: return run_sharpness_growth(config);
    case ExperimentKind::bilinear_sharp: return run_bilinear_sharp(config);
    case ExperimentKind::mixed_l2_check: return run_mixed_l2_check(config);
    case ExperimentKind::counterexample_growth: return run_counterexample_growth(config);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace mixnorm
