#pragma once

// Independent reference computations for the tests. Deliberately naive: no
// scaling, no compensated sums, no symmetry reductions.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double power_sum_norm(const std::vector<double>& v, double q) {
  if (q == inf) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

// Row-major strides for `shape`.
inline std::vector<std::size_t> strides(const std::vector<std::size_t>& shape) {
  std::vector<std::size_t> st(shape.size(), 1);
  for (std::size_t k = shape.size(); k-- > 1;) st[k - 1] = st[k] * shape[k];
  return st;
}

// Nested norm straight from the definition: axis sigma[0] outermost with q[0],
// ..., sigma[m-1] innermost with q[m-1]. `values` holds magnitudes; a trailing
// codomain axis of length `cod` (0 for none) is reduced first with q_cod.
inline double mixed_norm(const std::vector<double>& values, const std::vector<std::size_t>& shape,
                         const std::vector<double>& q, const std::vector<std::size_t>& sigma,
                         std::size_t cod = 0, double q_cod = 2.0) {
  std::vector<std::size_t> full = shape;
  if (cod) full.push_back(cod);
  const auto st = strides(full);
  std::vector<std::size_t> idx(full.size(), 0);
  std::function<double(std::size_t)> level = [&](std::size_t depth) -> double {
    if (depth == shape.size()) {
      std::size_t base = 0;
      for (std::size_t k = 0; k < shape.size(); ++k) base += idx[k] * st[k];
      if (!cod) return std::abs(values[base]);
      std::vector<double> v(cod);
      for (std::size_t j = 0; j < cod; ++j) v[j] = values[base + j];
      return power_sum_norm(v, q_cod);
    }
    const std::size_t axis = sigma[depth];
    std::vector<double> v(shape[axis]);
    for (std::size_t i = 0; i < shape[axis]; ++i) {
      idx[axis] = i;
      v[i] = level(depth + 1);
    }
    idx[axis] = 0;
    return power_sum_norm(v, q[depth]);
  };
  return level(0);
}

// A(x_1, ..., x_m) for a real row-major tensor.
inline double evaluate(const std::vector<double>& t, const std::vector<std::size_t>& shape,
                       const std::vector<std::vector<double>>& x) {
  const auto st = strides(shape);
  double total = 0.0;
  std::vector<std::size_t> idx(shape.size(), 0);
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    std::size_t rem = flat;
    double term = t[flat];
    for (std::size_t k = 0; k < shape.size(); ++k) {
      idx[k] = rem / st[k];
      rem %= st[k];
      term *= x[k][idx[k]];
    }
    total += term;
  }
  return total;
}

// Extreme points of the unit ball of l_p^n for p in {1, inf}.
inline std::vector<std::vector<double>> extreme_points(std::size_t n, double p) {
  std::vector<std::vector<double>> out;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) {
      for (double s : {1.0, -1.0}) {
        std::vector<double> e(n, 0.0);
        e[i] = s;
        out.push_back(e);
      }
    }
    return out;
  }
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = (mask >> i) & 1U ? -1.0 : 1.0;
    out.push_back(v);
  }
  return out;
}

// ||A|| over l_{p_1} x ... x l_{p_m} with every p_k in {1, inf}: maximum of
// |A| over all extreme points of all slots (no slot closed analytically).
inline double brute_force_norm(const std::vector<double>& t, const std::vector<std::size_t>& shape,
                               const std::vector<double>& p) {
  std::vector<std::vector<std::vector<double>>> pts;
  for (std::size_t k = 0; k < shape.size(); ++k) pts.push_back(extreme_points(shape[k], p[k]));
  std::vector<std::vector<double>> x(shape.size());
  double best = 0.0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == shape.size()) {
      best = std::max(best, std::abs(evaluate(t, shape, x)));
      return;
    }
    for (const auto& v : pts[k]) {
      x[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
  return best;
}

// Same, but the last slot has a general exponent and is closed by
// ||g||_{p*} computed with plain power sums.
inline double brute_force_norm_last_general(const std::vector<double>& t,
                                            const std::vector<std::size_t>& shape,
                                            const std::vector<double>& p) {
  const std::size_t m = shape.size();
  const double pl = p[m - 1];
  const double pstar = pl == 1.0 ? inf : (pl == inf ? 1.0 : pl / (pl - 1.0));
  std::vector<std::vector<std::vector<double>>> pts;
  for (std::size_t k = 0; k + 1 < m; ++k) pts.push_back(extreme_points(shape[k], p[k]));
  std::vector<std::vector<double>> x(m);
  double best = 0.0;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k + 1 == m) {
      std::vector<double> g(shape[m - 1]);
      for (std::size_t j = 0; j < g.size(); ++j) {
        x[m - 1].assign(shape[m - 1], 0.0);
        x[m - 1][j] = 1.0;
        g[j] = evaluate(t, shape, x);
      }
      best = std::max(best, power_sum_norm(g, pstar));
      return;
    }
    for (const auto& v : pts[k]) {
      x[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
  return best;
}

inline std::vector<double> random_signs(std::size_t size, std::mt19937_64& gen) {
  std::vector<double> v(size);
  std::bernoulli_distribution coin(0.5);
  for (auto& x : v) x = coin(gen) ? 1.0 : -1.0;
  return v;
}

inline std::vector<double> random_gaussian(std::size_t size, std::mt19937_64& gen) {
  std::vector<double> v(size);
  std::normal_distribution<double> g;
  for (auto& x : v) x = g(gen);
  return v;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace oracle
