#pragma once

#include <cstddef>
#include <functional>

namespace dhd {

/// Caps the number of worker threads used by library routines. 0 selects
/// std::thread::hardware_concurrency(). Results never depend on this value:
/// all parallel work is split into fixed tasks whose outputs are combined
/// in task order.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs task(i) for i in [0, n) on up to thread_count() workers. Exceptions
/// thrown by tasks are rethrown on the calling thread (first by task index).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace dhd
