#include "albench/rng.hpp"

namespace albench {

uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t a, uint64_t b) {
  // FNV-1a over the tag, folded with the master seed and indices.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  uint64_t s = mix64(master ^ h);
  s = mix64(s ^ (a + 0x9e3779b97f4a7c15ULL));
  s = mix64(s ^ (b + 0x7f4a7c159e3779b9ULL));
  return s;
}

}  // namespace albench
