#pragma once

#include <functional>

namespace ognidc {

// Thread budget: OGNIDC_THREADS when set (minimum 1), otherwise hardware
// concurrency.
int max_threads();

// Runs fn(i) for i in [begin, end), split across the thread budget. The body
// must only write disjoint state per index; small ranges run inline.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace ognidc
