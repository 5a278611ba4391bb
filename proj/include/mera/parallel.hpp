#pragma once

#include <cstddef>
#include <functional>

namespace mera {

// Worker count from MERA_WORKERS (>= 1), else the hardware concurrency.
std::size_t configured_workers();

// Runs fn(0..count-1) on up to `workers` threads. Each index writes only
// its own result slot, so output never depends on scheduling. The first
// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t workers);

} // namespace mera
