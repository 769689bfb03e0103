#pragma once

#include <cstdint>
#include <random>

namespace dqc1 {

/// Identifies one independent random stream: (campaign seed, trial, step).
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t step = 0;

  StreamKey with_step(std::uint64_t s) const { return {seed, trial, s}; }
  StreamKey with_trial(std::uint64_t t) const { return {seed, t, step}; }
};

/// Deterministic, platform-independent draws for one stream key.
///
/// The key is hashed with splitmix64 into the seed of a 64-bit Mersenne
/// twister; normal and uniform variates come from Boost.Random, whose
/// algorithms (unlike std:: distributions) are fixed across standard
/// libraries. Streams of distinct keys never share state.
class SampleStream {
 public:
  explicit SampleStream(const StreamKey& key);

  double normal();
  double normal(double mean, double stddev);
  /// Uniform in [0, 1).
  double uniform();
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace dqc1
