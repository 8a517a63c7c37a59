#pragma once

#include <cstddef>
#include <functional>

namespace cwphase::cli {

/// Worker count: hardware concurrency, capped by CW_PHASE_THREADS when set.
unsigned worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. After a
/// failure no new indices are started; every lower index has already been
/// claimed, so the exception rethrown is always the one from the lowest
/// failing index, as in a sequential loop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cwphase::cli
