#include <cmath>
#include <random>

#include "doctest.h"
#include "mixnorm/errors.hpp"
#include "mixnorm/opnorm.hpp"
#include "oracles.hpp"

using namespace mixnorm;

namespace {

MultilinearForm make_form(Shape shape, std::vector<double> values, ExponentVector p) {
  MultilinearForm f;
  f.tensor = CoefficientTensor(std::move(shape), std::move(values));
  f.p = std::move(p);
  return f;
}

MultilinearForm extremizer() {
  return make_form({2, 2}, {1.0, 1.0, 1.0, -1.0}, ExponentVector{kInf, kInf});
}

MultilinearForm random_sign_form(std::mt19937_64& gen, std::size_t m, std::size_t n,
                                 double p = kInf) {
  std::size_t size = 1;
  for (std::size_t k = 0; k < m; ++k) size *= n;
  return make_form(Shape(m, n), oracle::random_signs(size, gen), ExponentVector::uniform(m, p));
}

double lp(const std::vector<Complex>& x, double p) {
  std::vector<double> mags;
  for (auto z : x) mags.push_back(std::abs(z));
  return oracle::power_sum_norm(mags, p);
}

void check_witness(const MultilinearForm& f, const NormEstimate& est) {
  REQUIRE(est.witness.size() == f.arity());
  for (std::size_t k = 0; k < f.arity(); ++k) CHECK(lp(est.witness[k], f.p[k]) <= 1.0 + 1e-12);
  CHECK(oracle::rel_close(value_at(f, est.witness), est.value, 1e-10));
}

}  // namespace

TEST_CASE("evaluate") {
  const auto e = extremizer();
  CHECK(evaluate(e, {{1.0, 1.0}, {1.0, 1.0}})[0] == 2.0);
  CHECK(evaluate(e, {{0.0, 0.0}, {0.3, -2.0}})[0] == 0.0);
  CHECK(evaluate(e, {{0.0, 1.0}, {0.0, 1.0}})[0] == -1.0);
  CHECK_THROWS_AS(evaluate(e, {{1.0}, {1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(evaluate(e, {{1.0, 1.0}}), DomainError);

  std::mt19937_64 gen(3);
  const auto f = random_sign_form(gen, 3, 3);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::vector<double>> x{oracle::random_gaussian(3, gen), oracle::random_gaussian(3, gen),
                                       oracle::random_gaussian(3, gen)};
    const double ref = oracle::evaluate({f.tensor.real_values().begin(), f.tensor.real_values().end()},
                                        f.tensor.shape(), x);
    CHECK(oracle::rel_close(evaluate(f, x)[0], ref, 1e-12));
  }
}

TEST_CASE("dual maximizer") {
  const std::vector<double> g{3.0, 4.0};
  auto x = dual_maximizer(std::span<const double>(g), kInf);
  CHECK(x == std::vector<double>{1.0, 1.0});
  x = dual_maximizer(std::span<const double>(g), 1.0);
  CHECK(x == std::vector<double>{0.0, 1.0});
  x = dual_maximizer(std::span<const double>(g), 2.0);
  CHECK(x[0] == doctest::Approx(0.6));
  CHECK(x[1] == doctest::Approx(0.8));
  CHECK(dual_norm(std::span<const double>(g), kInf) == doctest::Approx(7.0));
  CHECK(dual_norm(std::span<const double>(g), 1.0) == doctest::Approx(4.0));
  CHECK(dual_norm(std::span<const double>(g), 2.0) == doctest::Approx(5.0));

  const std::vector<double> zero{0.0, 0.0};
  CHECK_THROWS_AS(dual_maximizer(std::span<const double>(zero), 2.0), DegenerateGradientError);
  const std::vector<double> with_zero{0.0, -2.0};
  CHECK(dual_maximizer(std::span<const double>(with_zero), kInf) == std::vector<double>{1.0, -1.0});
  const std::vector<double> tie{2.0, -2.0};
  CHECK(dual_maximizer(std::span<const double>(tie), 1.0) == std::vector<double>{1.0, 0.0});

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const auto h = oracle::random_gaussian(6, gen);
    const double p = 1.0 + 6.0 * u(gen);
    const double ps = p / (p - 1.0);
    const auto y = dual_maximizer(std::span<const double>(h), p);
    double dot = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j) dot += h[j] * y[j];
    CHECK(oracle::rel_close(oracle::power_sum_norm(y, p), 1.0, 1e-12));
    CHECK(oracle::rel_close(dot, oracle::power_sum_norm(h, ps), 1e-12));
  }

  const std::vector<Complex> gz{{3.0, 4.0}, {0.0, 0.0}};
  const auto z = dual_maximizer(std::span<const Complex>(gz), kInf);
  CHECK(std::abs(z[0] - Complex(0.6, -0.8)) < 1e-15);
  CHECK(z[1] == Complex(1.0, 0.0));
}

TEST_CASE("oracle examples") {
  auto est = exact_sign_enumeration(extremizer());
  CHECK(est.value == 2.0);
  CHECK(est.kind == NormKind::exact);
  check_witness(extremizer(), est);

  const auto diag = make_form({3, 3}, {1.5, 0, 0, 0, -2.0, 0, 0, 0, 0.25}, ExponentVector{kInf, kInf});
  CHECK(exact_sign_enumeration(diag).value == doctest::Approx(3.75).epsilon(1e-15));
  const auto ones = make_form({5, 5}, std::vector<double>(25, 1.0), ExponentVector{kInf, kInf});
  CHECK(exact_sign_enumeration(ones).value == 25.0);

  // one slot enumerated as basis vectors: ||A|| over l_1 x c_0 is the largest row l_1 norm
  const auto rows = make_form({2, 3}, {1, -2, 3, 4, 0, -1}, ExponentVector{1.0, kInf});
  CHECK(exact_sign_enumeration(rows).value == doctest::Approx(6.0));
}

TEST_CASE("oracle applicability and budget") {
  std::mt19937_64 gen(7);
  const auto big = random_sign_form(gen, 2, 30);
  std::string reason;
  CHECK(enumeration_count(big, &reason).has_value());
  CHECK_FALSE(oracle_applicable(big, 1 << 20));
  CHECK_THROWS_AS(exact_sign_enumeration(big, 1 << 20), BudgetError);
  try {
    exact_sign_enumeration(big, 1 << 20);
  } catch (const BudgetError& e) {
    CHECK(e.required() >= std::ldexp(1.0, 29));
  }

  auto l2 = random_sign_form(gen, 2, 4, 2.0);
  CHECK_FALSE(enumeration_count(l2, &reason).has_value());
  CHECK_FALSE(reason.empty());
  CHECK_THROWS_AS(exact_sign_enumeration(l2), UnsupportedError);

  MultilinearForm z;
  z.tensor = CoefficientTensor({2, 2}, std::vector<Complex>(4, Complex(1.0, 0.0)));
  z.p = ExponentVector{kInf, kInf};
  z.field = Field::complex;
  CHECK_FALSE(oracle_applicable(z));
  CHECK_THROWS_AS(estimate_norm(z, NormMethod::oracle), UnsupportedError);
}

TEST_CASE("oracle matches full brute force") {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 150; ++i) {
    const std::size_t m = 2 + i % 2;
    const std::size_t n = m == 2 ? 2 + i % 5 : 2 + i % 3;
    std::size_t size = 1;
    for (std::size_t k = 0; k < m; ++k) size *= n;
    const auto v = i % 2 ? oracle::random_gaussian(size, gen) : oracle::random_signs(size, gen);
    std::vector<double> p(m, kInf);
    if (i % 3 == 0) p[0] = 1.0;
    const auto f = make_form(Shape(m, n), v, ExponentVector(p));
    const auto est = exact_sign_enumeration(f);
    CHECK(oracle::rel_close(est.value, oracle::brute_force_norm(v, f.tensor.shape(), p), 1e-12));
    check_witness(f, est);
  }
}

TEST_CASE("oracle closes a general last slot") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(1.0, 5.0);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + i % 4;
    const auto v = oracle::random_gaussian(n * n, gen);
    std::vector<double> p{i % 2 ? 1.0 : kInf, u(gen)};
    const auto f = make_form({n, n}, v, ExponentVector(p));
    const auto est = exact_sign_enumeration(f);
    CHECK(oracle::rel_close(est.value, oracle::brute_force_norm_last_general(v, {n, n}, p), 1e-12));
    check_witness(f, est);
  }
}

TEST_CASE("ascent examples") {
  auto est = alternating_ascent(extremizer());
  CHECK(est.kind == NormKind::lower_bound);
  CHECK(est.value == doctest::Approx(2.0).epsilon(1e-12));

  const std::vector<double> uvec{1.0, -2.0, 2.0}, vvec{3.0, 4.0};
  std::vector<double> outer;
  for (double a : uvec)
    for (double b : vvec) outer.push_back(a * b);
  const auto r1 = make_form({3, 2}, outer, ExponentVector{2.0, 2.0});
  est = alternating_ascent(r1);
  CHECK(std::abs(est.value - 15.0) <= 1e-8 * 15.0);
  check_witness(r1, est);

  const auto zero = make_form({3, 3}, std::vector<double>(9, 0.0), ExponentVector{2.0, kInf});
  CHECK(alternating_ascent(zero).value == 0.0);
}

TEST_CASE("ascent never exceeds the oracle") {
  std::mt19937_64 gen(17);
  AscentOptions opts;
  opts.restarts = 8;
  for (int i = 0; i < 120; ++i) {
    const std::size_t m = 2 + i % 2;
    const std::size_t n = m == 2 ? 2 + i % 11 : 2 + i % 7;
    const auto f = random_sign_form(gen, m, n);
    opts.seed = static_cast<std::uint64_t>(i);
    const auto exact = exact_sign_enumeration(f);
    const auto est = alternating_ascent(f, opts);
    CHECK(est.value <= exact.value + 1e-10);
    check_witness(f, est);
  }
}

TEST_CASE("ascent reproducibility and scale equivariance") {
  std::mt19937_64 gen(19);
  MultilinearForm f = random_sign_form(gen, 3, 5, 3.0);
  AscentOptions opts;
  opts.seed = 99;
  const auto a = alternating_ascent(f, opts);
  const auto b = alternating_ascent(f, opts);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);

  MultilinearForm g = f;
  g.tensor = f.tensor.scaled(-2.5);
  CHECK(oracle::rel_close(alternating_ascent(g, opts).value, 2.5 * a.value, 1e-10));

  const auto e = extremizer();
  MultilinearForm e3 = e;
  e3.tensor = e.tensor.scaled(3.0);
  CHECK(exact_sign_enumeration(e3).value == 3.0 * exact_sign_enumeration(e).value);
}

TEST_CASE("smaller balls give smaller norms") {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 3 + i % 4;
    const auto v = oracle::random_gaussian(n * n, gen);
    const auto big = make_form({n, n}, v, ExponentVector{kInf, kInf});
    const auto small = make_form({n, n}, v, ExponentVector{1.0, kInf});
    CHECK(exact_sign_enumeration(small).value <= exact_sign_enumeration(big).value + 1e-12);
    const auto mid = make_form({n, n}, v, ExponentVector{kInf, 2.0});
    CHECK(exact_sign_enumeration(mid).value <= exact_sign_enumeration(big).value + 1e-12);
  }
}

TEST_CASE("complex forms") {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  std::vector<Complex> z(9);
  for (auto& x : z) x = std::polar(1.0, u(gen));
  MultilinearForm f;
  f.tensor = CoefficientTensor({3, 3}, z);
  f.p = ExponentVector{kInf, kInf};
  f.field = Field::complex;
  const auto est = estimate_norm(f);
  CHECK(est.kind == NormKind::lower_bound);
  check_witness(f, est);
  for (const auto& w : est.witness)
    for (auto c : w) CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);

  // complex scalars on a real tensor can only do at least as well as real signs
  auto real = make_form({3, 3}, oracle::random_signs(9, gen), ExponentVector{kInf, kInf});
  const double exact = exact_sign_enumeration(real).value;
  real.field = Field::complex;
  CHECK(estimate_norm(real).value >= exact - 1e-10);
}

TEST_CASE("vector-valued forms") {
  // A(x) = x viewed into l_s: ||A|| over l_inf^2 -> l_s^2 is 2^{1/s}
  MultilinearForm f;
  f.tensor = CoefficientTensor({2}, std::vector<double>{1.0, 0.0, 0.0, 1.0}, 2);
  f.p = ExponentVector{kInf};
  f.codomain_s = 1.5;
  CHECK(f.vector_valued());
  const auto est = estimate_norm(f);
  CHECK(est.kind == NormKind::exact);
  CHECK(est.value == doctest::Approx(std::pow(2.0, 1.0 / 1.5)).epsilon(1e-12));
  CHECK(est.witness.size() == 1);
  CHECK(oracle::rel_close(value_at(f, est.witness), est.value, 1e-10));
}

TEST_CASE("estimate_norm dispatch and ratio") {
  const auto e = extremizer();
  CHECK(estimate_norm(e).kind == NormKind::exact);
  CHECK(estimate_norm(e, NormMethod::ascent).kind == NormKind::lower_bound);
  CHECK(norm_method_from_string("auto") == NormMethod::automatic);
  CHECK_THROWS_AS(norm_method_from_string("best"), ParseError);

  for (double a : {1.0, 4.0 / 3.0, 1.5, 2.0}) {
    for (double b : {1.0, 4.0 / 3.0, 1.5, 2.0}) {
      if (1.0 / a + 1.0 / b > 1.5) continue;
      const double r = ratio(e, MixedNormSpec::identity(ExponentVector{a, b}), estimate_norm(e));
      CHECK(std::abs(r - std::pow(2.0, 1.0 / a + 1.0 / b - 1.0)) < 1e-12);
    }
  }
  const auto single = make_form({3, 2}, {0, 0, 0, -4.0, 0, 0}, ExponentVector{kInf, kInf});
  CHECK(ratio(single, MixedNormSpec::identity(ExponentVector{1.0, 1.7}), estimate_norm(single)) ==
        doctest::Approx(1.0).epsilon(1e-15));
  NormEstimate zero;
  CHECK_THROWS_AS(ratio(e, MixedNormSpec::identity(ExponentVector{2.0, 2.0}), zero),
                  DegenerateFormError);
}
