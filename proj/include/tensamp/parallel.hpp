#pragma once

#include <cstddef>
#include <functional>

namespace tensamp {

/// Worker count used by parallel_for. 0 selects hardware concurrency.
/// Results must never depend on this setting: parallel_for bodies write to
/// disjoint slots and any reduction happens after the join, in index order.
void set_thread_count(unsigned k);
unsigned thread_count();

/// Run body(0..count-1) on the configured worker pool. The body must be safe
/// to call concurrently for distinct indices. Exceptions are captured and the
/// first one (by completion order) is rethrown on the caller thread.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tensamp
