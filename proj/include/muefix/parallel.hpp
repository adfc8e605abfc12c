// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>

namespace muefix {

// Thread count resolution: explicit request > MUEFIX_THREADS > hardware.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, count) on a fixed block partition. Every task
// writes only to its own output slot, so results are identical for any
// thread count. The first exception thrown by a task is rethrown.
void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t)>& fn);

}  // namespace muefix
