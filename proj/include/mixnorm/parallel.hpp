#pragma once

#include <cstddef>
#include <functional>

namespace mixnorm {

/// Worker count: hardware concurrency, capped by MIXNORM_THREADS when set.
std::size_t worker_count();

/// Runs body(i) for i in [0, count). Each index must write only its own
/// output slot; callers merge afterwards in index order, so results never
/// depend on scheduling. Nested calls from inside a worker run serially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace mixnorm
