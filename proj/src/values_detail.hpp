#pragma once

#include <cstddef>
#include <functional>

namespace qgv::values {

// Runs body(0..n-1) across the restart worker pool; bodies must be
// independent (per-restart RNG streams) so the schedule cannot affect
// results.
void run_restarts(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace qgv::values
