#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace levylt {

/// Environment variable that overrides any requested thread count.
inline constexpr const char* kThreadsEnv = "LEVYLT_THREADS";

/// Worker count: $LEVYLT_THREADS if set to a positive integer, else the
/// request if positive, else the hardware concurrency.
std::size_t resolve_threads(std::optional<std::size_t> requested = std::nullopt);

/// Calls body(i) for every i in [0, n) on up to `threads` workers. Work items
/// must write only to their own slots, so results do not depend on scheduling.
/// The first exception thrown by any item is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace levylt
