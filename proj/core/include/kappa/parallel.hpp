#pragma once

#include <cstddef>
#include <functional>

namespace kappa {

/// Worker count used by the restart/trial loops. Reads KAPPA_THREADS when
/// set to a positive integer, otherwise std::thread::hardware_concurrency().
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 means
/// default_thread_count()). Indices are handed out dynamically, so body must
/// write only to slot i of any shared output. Rethrows the first exception.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace kappa
