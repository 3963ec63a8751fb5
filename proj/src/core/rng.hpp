#ifndef CMH_CORE_RNG_HPP
#define CMH_CORE_RNG_HPP

#include <cstdint>
#include <string_view>

namespace cmh {

// Deterministic uniform stream (splitmix64). Every random quantity in the
// library is produced by inverse-CDF transforms of these uniforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// 64-bit finalizer used for all seed derivations.
std::uint64_t mix64(std::uint64_t x);

// Seed for one chain: hash of (master seed, sampler tag, chain index).
std::uint64_t derive_chain_seed(std::uint64_t master_seed, std::string_view tag,
                                std::uint64_t chain_index);

// Independent substream for one iteration of a chain. Keeping each step on
// its own substream means samplers that consume different numbers of
// uniforms per step (GS vs CMH) stay aligned across steps.
inline RngStream step_stream(std::uint64_t chain_seed, std::uint64_t step) {
  return RngStream(mix64(chain_seed ^ mix64(step + 0x517cc1b727220a95ULL)));
}

}  // namespace cmh

#endif
