#include "cramerdepth/rng.hpp"

#include <cmath>

namespace cramerdepth {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

SeedStream::SeedStream(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed + kGamma) + stream)) {}

std::uint64_t SeedStream::next_u64() {
  return mix64(key_ + (++ctr_) * kGamma);
}

double SeedStream::next_uniform() {
  // 53 mantissa bits; +0.5 ulp offset keeps the value strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeedStream::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = next_uniform();
  double u2 = next_uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 6.283185307179586476925287 * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

double SeedStream::next_exponential() {
  return -std::log(next_uniform());
}

}  // namespace cramerdepth
