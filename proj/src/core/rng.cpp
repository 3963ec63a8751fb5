#include "core/rng.hpp"

namespace cmh {

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_chain_seed(std::uint64_t master_seed, std::string_view tag,
                                std::uint64_t chain_index) {
  // FNV-1a over the tag, folded with the master seed and chain index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  h = mix64(h ^ mix64(master_seed));
  return mix64(h ^ mix64(chain_index + 0x2545f4914f6cdd1dULL));
}

}  // namespace cmh
