#pragma once

#include <cstddef>
#include <functional>

namespace fop {

/// Number of hardware threads, at least 1.
int default_jobs() noexcept;

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Work items must
/// be independent; the first exception thrown by any item is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace fop
