#pragma once

#include <functional>

namespace chaoscoupler::parallel {

/// 0 selects hardware concurrency.
void set_threads(int n);
int threads();
/// Reads CHAOS_COUPLER_THREADS when `requested` is negative.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, n). Each index writes its own output slot, so the
/// result never depends on scheduling. The first exception is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace chaoscoupler::parallel
