#include "dqc1/sampling.hpp"

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace dqc1 {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleStream::SampleStream(const StreamKey& key)
    : engine_(mix64(mix64(mix64(key.seed) ^ key.trial) ^ (key.step * 0xd1b54a32d192ed03ULL))) {}

double SampleStream::normal() { return boost::random::normal_distribution<double>(0.0, 1.0)(engine_); }

double SampleStream::normal(double mean, double stddev) {
  return boost::random::normal_distribution<double>(mean, stddev)(engine_);
}

double SampleStream::uniform() { return boost::random::uniform_01<double>()(engine_); }

}  // namespace dqc1
