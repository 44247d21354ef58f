#pragma once

#include <cstddef>
#include <functional>

namespace imf {

/// Worker count: IMF_THREADS if set, else the hardware concurrency.
std::size_t thread_count() noexcept;

/// Calls body(i) for every i < count on up to thread_count() threads with
/// static chunking. Callers write results by index, so outcomes do not
/// depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace imf
