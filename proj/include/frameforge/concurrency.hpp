#pragma once

#include <functional>

namespace frameforge {

/// Worker cap: FRAMEFORGE_THREADS when set (>= 1), otherwise the hardware
/// concurrency.
int max_threads();

/// Runs body(i) for i in [0, n) across worker threads with a static
/// partition. Results must be written to per-index slots; any exception is
/// rethrown on the calling thread. Serial when the cap or n is 1.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace frameforge
