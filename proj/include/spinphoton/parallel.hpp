#ifndef SPINPHOTON_PARALLEL_HPP
#define SPINPHOTON_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>

namespace spinphoton {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-work-item seed: splitmix(global_seed, index). Results depend only on
/// (global_seed, index), never on which worker runs the item.
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index);

/// Uniform double in (0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_interval(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Runs body(i) for i in [0, n) on up to `workers` threads (workers <= 0
/// means the OpenMP default). Bodies must write only to slot i of a
/// pre-sized output. If any body throws, the exception of the lowest failing
/// index is rethrown after the loop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace spinphoton

#endif  // SPINPHOTON_PARALLEL_HPP
