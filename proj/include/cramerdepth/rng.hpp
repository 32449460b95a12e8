#pragma once

#include <cstdint>

namespace cramerdepth {

// Counter-based stream: draw k of stream s under seed is a pure function of
// (seed, s, k). Distinct stream ids give independent streams, so parallel
// simulation units can be seeded up front and merged deterministically.
// Mixing is the splitmix64 finalizer over key + k * golden-gamma.
class SeedStream {
 public:
  SeedStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  // Uniform on (0,1); never returns an exact endpoint.
  double next_uniform();
  // Standard normal via Box-Muller (pair cached; sequence is still a pure
  // function of the draw index).
  double next_gaussian();
  double next_exponential();  // rate 1

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cramerdepth
