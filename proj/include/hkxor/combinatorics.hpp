// Small subset and letter-assignment helpers shared by the Kikuchi builders.
#pragma once

#include <bit>
#include <cstdint>
#include <vector>

#include "hkxor/pauli.hpp"

namespace hkxor {

// Calls f(mask) for every r-subset of {0..m-1} in increasing mask order (Gosper).
template <class F>
void for_each_subset(int m, int r, F&& f) {
  if (r < 0 || r > m) return;
  if (r == 0) {
    f(uint64_t{0});
    return;
  }
  const uint64_t limit = m == 64 ? 0 : (uint64_t{1} << m);
  uint64_t s = (r == 64) ? ~uint64_t{0} : ((uint64_t{1} << r) - 1);
  for (;;) {
    f(s);
    const uint64_t c = s & (~s + 1), rr = s + c;
    if (rr == 0) return;
    s = (((rr ^ s) >> 2) / c) | rr;
    if (limit && s >= limit) return;
  }
}

// Maps a mask over positions of `sites` to a mask over sites.
inline uint64_t scatter(uint64_t pos_mask, const std::vector<int>& sites) {
  uint64_t out = 0;
  for (uint64_t s = pos_mask; s; s &= s - 1) out |= uint64_t{1} << sites[std::countr_zero(s)];
  return out;
}

inline std::vector<int> pick(uint64_t pos_mask, const std::vector<int>& items) {
  std::vector<int> out;
  for (uint64_t s = pos_mask; s; s &= s - 1) out.push_back(items[std::countr_zero(s)]);
  return out;
}

// Letters X/Y/Z from base-3 digits of code, first site most significant.
inline PauliOp letters_on(int n, const std::vector<int>& sites, uint64_t code) {
  static const char kL[3] = {'X', 'Y', 'Z'};
  PauliOp p = PauliOp::identity(n);
  for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
    p.set(sites[i], kL[code % 3]);
    code /= 3;
  }
  return p;
}

}  // namespace hkxor
