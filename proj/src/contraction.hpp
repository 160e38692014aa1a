#pragma once

// Internal helpers shared by the ascent and the enumeration oracle.

#include <complex>
#include <cstddef>
#include <vector>

#include "mixnorm/errors.hpp"
#include "mixnorm/opnorm.hpp"

namespace mixnorm::detail {

/// Scalar (m+1)-linear view of a form: the codomain axis becomes a slot with
/// exponent s*.
inline MultilinearForm scalar_view(const MultilinearForm& form) {
  if (!form.vector_valued()) return form;
  MultilinearForm flat;
  flat.tensor = form.tensor.without_codomain();
  std::vector<double> p(form.p.values().begin(), form.p.values().end());
  p.push_back(conjugate_exponent(*form.codomain_s));
  flat.p = ExponentVector(std::move(p));
  flat.field = form.field;
  return flat;
}

template <class S>
std::vector<S> tensor_values(const CoefficientTensor& t) {
  if constexpr (std::is_same_v<S, double>) {
    const auto v = t.real_values();
    return {v.begin(), v.end()};
  } else {
    return t.as_complex();
  }
}

/// g[i] = sum over all indices with i_k = i of T_i * prod_{j != k} x_j[i_j].
/// `x[k]` is ignored.
template <class S>
void contract_except(const std::vector<S>& values, const Shape& shape,
                     const std::vector<std::vector<S>>& x, std::size_t k,
                     std::vector<S>& out, std::vector<S>& scratch) {
  const std::size_t m = shape.size();
  const std::vector<S>* cur = &values;
  std::size_t len = values.size();
  std::vector<S>* bufs[2] = {&out, &scratch};
  int which = 1;

  // trailing axes: contiguous fibres
  for (std::size_t a = m; a-- > k + 1;) {
    const std::size_t n = shape[a];
    const std::size_t outer = len / n;
    std::vector<S>& dst = *bufs[which];
    dst.assign(outer, S{});
    const auto& xa = x[a];
    for (std::size_t o = 0; o < outer; ++o) {
      S acc{};
      const S* row = cur->data() + o * n;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * xa[j];
      dst[o] = acc;
    }
    cur = &dst;
    len = outer;
    which ^= 1;
  }
  // leading axes: strided slabs
  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t n = shape[a];
    const std::size_t rest = len / n;
    std::vector<S>& dst = *bufs[which];
    dst.assign(rest, S{});
    const auto& xa = x[a];
    for (std::size_t j = 0; j < n; ++j) {
      const S w = xa[j];
      if (w == S{}) continue;
      const S* slab = cur->data() + j * rest;
      for (std::size_t r = 0; r < rest; ++r) dst[r] += w * slab[r];
    }
    cur = &dst;
    len = rest;
    which ^= 1;
  }
  if (cur != &out) out = *cur;
}

}  // namespace mixnorm::detail
