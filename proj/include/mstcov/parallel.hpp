#pragma once

#include <cstddef>
#include <functional>

namespace mstcov {

/// Worker count used by parallel sections. 0 (the default) means
/// std::thread::hardware_concurrency().
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Runs body(k) for k in [0, count) over the configured workers. Indices are
/// handed out in contiguous chunks; callers must write results into
/// per-index slots so the outcome does not depend on scheduling. The first
/// exception thrown by any body is rethrown after all workers finish. A
/// parallel_for called from inside a worker runs sequentially.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

} // namespace mstcov
