#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace stabl {

// Geometric interval schedule: one restarting expert per scale. Scales are
// strictly increasing, each in [1, horizon]; powers of two by default,
// arbitrary positive lengths when supplied explicitly.
struct IntervalSchedule {
  long horizon = 0;
  std::vector<long> scales;

  int B() const { return static_cast<int>(scales.size()); }
};

// Default scales are {2^k : ceil(2 + log2 log2 T) <= k <= floor(log2 T)}.
// For T < 16 that range is empty, so k_min clamps down to floor(log2 T):
// a single expert at the largest power-of-two scale keeps B >= 1.
inline IntervalSchedule build_schedule(
    long T, const std::optional<std::vector<long>>& explicit_scales = std::nullopt) {
  if (T < 2) throw std::invalid_argument("build_schedule: horizon must be >= 2");

  IntervalSchedule schedule;
  schedule.horizon = T;

  if (explicit_scales.has_value()) {
    if (explicit_scales->empty()) {
      throw std::invalid_argument("build_schedule: explicit scale list is empty");
    }
    long prev = 0;
    for (long scale : *explicit_scales) {
      if (scale < 1 || scale > T) {
        throw std::invalid_argument("build_schedule: scales must lie in [1, T]");
      }
      if (scale <= prev) {
        throw std::invalid_argument("build_schedule: scales must be strictly increasing");
      }
      prev = scale;
    }
    schedule.scales = *explicit_scales;
    return schedule;
  }

  const int k_max =
      std::bit_width(static_cast<std::uint64_t>(T)) - 1;  // floor(log2 T), exact
  int k_min = static_cast<int>(
      std::ceil(2.0 + std::log2(std::log2(static_cast<double>(T)))));
  if (k_min > k_max) k_min = k_max;
  for (int k = k_min; k <= k_max; ++k) {
    schedule.scales.push_back(1L << k);
  }
  return schedule;
}

}  // namespace stabl
