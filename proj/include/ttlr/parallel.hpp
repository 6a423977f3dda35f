#pragma once

#include <cstddef>
#include <functional>

namespace ttlr {

/// Process-wide worker count. 0 selects the sequential reference mode.
void set_thread_count(int threads);
int thread_count();

/// Runs body(i) for i in [0, n). Every index is visited exactly once; callers
/// must write only to storage owned by index i so results do not depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ttlr
