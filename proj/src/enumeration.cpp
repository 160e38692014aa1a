// Exact operator norm by enumerating extreme points.
//
// Slots 0..M-2 (after flattening a codomain) range over extreme points of
// their balls: sign vectors for p = inf, basis vectors for p = 1 (the sign is
// absorbed by the final absolute value). The last slot is closed in closed
// form by its dual norm. The first p = inf slot has its leading sign pinned to
// +1, since x -> -x leaves |A| unchanged.
//
// The innermost enumerated slot is walked in Gray-code order so each step
// updates the running functional g in O(n_last). The linear pattern index is
// split into fixed-size chunks; chunk results merge by (max value, lowest
// index), independent of the worker count.

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "contraction.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/opnorm.hpp"
#include "mixnorm/parallel.hpp"

namespace mixnorm {

namespace {

constexpr std::uint64_t kChunk = std::uint64_t{1} << 15;
constexpr std::uint64_t kRefreshPeriod = 4096;

struct SlotPlan {
  std::size_t n = 0;
  bool basis = false;    // p = 1: basis vectors; else sign vectors
  std::size_t fixed = 0; // leading coordinates pinned to +1
  std::uint64_t count = 0;
};

struct Plan {
  std::vector<SlotPlan> slots;  // enumerated slots 0..M-2
  std::uint64_t outer_count = 1;
  std::uint64_t inner_count = 1;
  double total = 1.0;
};

std::optional<Plan> make_plan(const MultilinearForm& flat, std::string* reason) {
  auto fail = [&](const std::string& why) -> std::optional<Plan> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  if (flat.uses_complex_arguments()) return fail("the oracle needs real scalars");
  const std::size_t m = flat.arity();
  Plan plan;
  bool pinned = false;
  double log2_total = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    SlotPlan s;
    s.n = flat.tensor.dim(k);
    if (flat.p[k] == 1.0) {
      s.basis = true;
      log2_total += std::log2(static_cast<double>(s.n));
    } else if (flat.p[k] == kInf) {
      s.fixed = pinned ? 0 : 1;
      pinned = true;
      log2_total += static_cast<double>(s.n - s.fixed);
    } else {
      return fail("slot " + std::to_string(k + 1) +
                  " has p outside {1, inf}; its ball has no finite set of extreme points");
    }
    plan.slots.push_back(s);
  }
  plan.total = std::exp2(log2_total);
  if (log2_total > 62.0) return plan;  // counts left unset; caller rejects on budget
  for (auto& s : plan.slots) {
    s.count = s.basis ? s.n : (std::uint64_t{1} << (s.n - s.fixed));
  }
  if (!plan.slots.empty()) {
    plan.inner_count = plan.slots.back().count;
    for (std::size_t k = 0; k + 1 < plan.slots.size(); ++k) plan.outer_count *= plan.slots[k].count;
  }
  plan.total = static_cast<double>(plan.outer_count) * static_cast<double>(plan.inner_count);
  return plan;
}

// Argument vector for pattern `code` of a slot. Sign slots use the Gray code
// of `code` when `gray` is set.
void decode_slot(const SlotPlan& s, std::uint64_t code, bool gray, std::vector<double>& x) {
  x.assign(s.n, 0.0);
  if (s.basis) {
    x[code] = 1.0;
    return;
  }
  const std::uint64_t bits = gray ? (code ^ (code >> 1)) : code;
  for (std::size_t i = 0; i < s.n; ++i) {
    if (i < s.fixed) {
      x[i] = 1.0;
    } else {
      x[i] = ((bits >> (i - s.fixed)) & 1U) != 0 ? -1.0 : 1.0;
    }
  }
}

void decode_outer(const Plan& plan, std::uint64_t outer, std::vector<std::vector<double>>& x) {
  for (std::size_t k = plan.slots.size() - 1; k-- > 0;) {
    const std::uint64_t c = plan.slots[k].count;
    decode_slot(plan.slots[k], outer % c, false, x[k]);
    outer /= c;
  }
}

// ||g||_{p*}; plain sums for the common cases since this runs per pattern
double closing_value(std::span<const double> g, double p_last) {
  if (p_last == kInf) {
    double s = 0.0;
    for (double v : g) s += std::abs(v);
    return s;
  }
  if (p_last == 1.0) {
    double s = 0.0;
    for (double v : g) s = std::max(s, std::abs(v));
    return s;
  }
  if (p_last == 2.0) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
  }
  return dual_norm(g, p_last);
}

struct ChunkBest {
  double value = -1.0;
  std::uint64_t index = 0;
};

// matrix B (rows = inner slot, cols = last slot) for the current outer pattern
void build_matrix(const std::vector<double>& values, const Shape& shape,
                  std::vector<std::vector<double>>& x, std::vector<double>& mat,
                  std::vector<double>& scratch) {
  // contract the outer slots (all but the final two) from the front
  const std::size_t m = shape.size();
  const std::vector<double>* cur = &values;
  std::size_t len = values.size();
  std::vector<double>* bufs[2] = {&mat, &scratch};
  int which = 0;
  for (std::size_t k = 0; k + 2 < m; ++k) {
    const std::size_t n = shape[k];
    const std::size_t rest = len / n;
    std::vector<double>& dst = *bufs[which];
    dst.assign(rest, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = x[k][j];
      if (w == 0.0) continue;
      const double* slab = cur->data() + j * rest;
      for (std::size_t r = 0; r < rest; ++r) dst[r] += w * slab[r];
    }
    cur = &dst;
    len = rest;
    which ^= 1;
  }
  if (cur != &mat) mat = *cur;
}

ChunkBest scan_chunk(const std::vector<double>& values, const Shape& shape, const Plan& plan,
                     double p_last, std::uint64_t begin, std::uint64_t end) {
  const std::size_t m = shape.size();
  const SlotPlan& inner = plan.slots.back();
  const std::size_t cols = shape[m - 1];
  std::vector<std::vector<double>> x(m);
  std::vector<double> mat;
  std::vector<double> scratch;
  std::vector<double> g(cols);
  std::vector<double> y;

  ChunkBest best;
  std::uint64_t current_outer = ~std::uint64_t{0};
  std::uint64_t since_refresh = 0;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const std::uint64_t outer = idx / plan.inner_count;
    const std::uint64_t t = idx % plan.inner_count;
    const bool fresh = outer != current_outer || idx == begin || since_refresh >= kRefreshPeriod ||
                       inner.basis;
    if (outer != current_outer) {
      decode_outer(plan, outer, x);
      build_matrix(values, shape, x, mat, scratch);
      current_outer = outer;
    }
    if (fresh) {
      decode_slot(inner, t, !inner.basis, y);
      std::fill(g.begin(), g.end(), 0.0);
      for (std::size_t i = 0; i < inner.n; ++i) {
        if (y[i] == 0.0) continue;
        const double* row = mat.data() + i * cols;
        for (std::size_t j = 0; j < cols; ++j) g[j] += y[i] * row[j];
      }
      since_refresh = 0;
    } else {
      // Gray step t-1 -> t flips bit ctz(t)
      const std::size_t i = inner.fixed + static_cast<std::size_t>(std::countr_zero(t));
      y[i] = -y[i];
      const double w = 2.0 * y[i];
      const double* row = mat.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) g[j] += w * row[j];
      ++since_refresh;
    }
    const double v = closing_value(g, p_last);
    if (v > best.value) {
      best.value = v;
      best.index = idx;
    }
  }
  return best;
}

}  // namespace

std::optional<double> enumeration_count(const MultilinearForm& form, std::string* reason) {
  form.validate();
  const auto plan = make_plan(detail::scalar_view(form), reason);
  if (!plan) return std::nullopt;
  return plan->total;
}

bool oracle_applicable(const MultilinearForm& form, double budget) {
  const auto count = enumeration_count(form);
  return count && *count <= budget;
}

NormEstimate exact_sign_enumeration(const MultilinearForm& form, double budget) {
  form.validate();
  const MultilinearForm flat = detail::scalar_view(form);
  std::string reason;
  const auto plan = make_plan(flat, &reason);
  if (!plan) throw UnsupportedError("exact enumeration not applicable: " + reason);
  if (plan->total > budget) {
    throw BudgetError("exact enumeration needs " + format_exact(plan->total) +
                          " patterns, budget is " + format_exact(budget),
                      plan->total);
  }

  const Shape& shape = flat.tensor.shape();
  const std::size_t m = shape.size();
  const double p_last = flat.p[m - 1];
  const auto values = detail::tensor_values<double>(flat.tensor);

  std::vector<std::vector<double>> witness(m);
  if (m >= 2) {
    const std::uint64_t total = plan->outer_count * plan->inner_count;
    const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
    std::vector<ChunkBest> results(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      const std::uint64_t begin = c * kChunk;
      results[c] = scan_chunk(values, shape, *plan, p_last, begin, std::min(total, begin + kChunk));
    });
    ChunkBest best = results.front();
    for (const auto& r : results) {
      if (r.value > best.value) best = r;
    }
    decode_outer(*plan, best.index / plan->inner_count, witness);
    decode_slot(plan->slots.back(), best.index % plan->inner_count, !plan->slots.back().basis,
                witness[m - 2]);
  }

  // close the last slot exactly
  std::vector<double> g;
  std::vector<double> scratch;
  detail::contract_except(values, shape, witness, m - 1, g, scratch);
  if (std::any_of(g.begin(), g.end(), [](double v) { return v != 0.0; })) {
    witness[m - 1] = dual_maximizer(g, p_last);
  } else {
    witness[m - 1].assign(shape[m - 1], 0.0);
    witness[m - 1][0] = 1.0;
  }

  NormEstimate est;
  est.kind = NormKind::exact;
  est.witness.resize(form.arity());
  for (std::size_t k = 0; k < form.arity(); ++k) {
    est.witness[k].assign(witness[k].begin(), witness[k].end());
  }
  est.value = form.vector_valued() ? value_at(form, est.witness) : dual_norm(g, p_last);
  est.iterations = static_cast<std::size_t>(plan->total);
  est.restarts_used = 0;
  return est;
}

}  // namespace mixnorm
