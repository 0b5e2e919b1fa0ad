#pragma once

#include <cmath>
#include <cstdint>

namespace stabl {

// splitmix64: cheap, stateless-splittable generator; used everywhere so that
// runs are bit-reproducible across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): top 53 bits, every value exactly representable.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Deterministic sub-stream seeds: run seed and stream index are pushed through
// the mixer so streams are pairwise independent for any base seed.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x123456789abcdefULL));
  mix.next();
  return mix.next();
}

// Stream indices used by the harness: 0 = environment generation,
// 1 = play draws, 2 = observation draws. Separate play/observe streams make
// the play/observe decoupling property directly testable.
struct RunStreams {
  SplitMix64 play;
  SplitMix64 observe;

  explicit RunStreams(std::uint64_t seed)
      : play(derive_stream_seed(seed, 1)), observe(derive_stream_seed(seed, 2)) {}
  RunStreams(SplitMix64 play_stream, SplitMix64 observe_stream)
      : play(play_stream), observe(observe_stream) {}
};

inline constexpr std::uint64_t kEnvironmentStream = 0;

// Box-Muller on the uniform stream; std::normal_distribution is
// implementation-defined and would break bit-stable outputs.
inline double standard_normal(SplitMix64& rng) {
  double u1 = rng.uniform();
  const double u2 = rng.uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  constexpr double kTwoPi = 6.283185307179586476925287;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace stabl
