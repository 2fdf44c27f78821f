#pragma once

#include <array>
#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace sl2pc {

// Sorted index subsets of {0..5} are stored as bitmasks.
using Mask = std::uint8_t;

inline int popcount(Mask m) { return std::popcount(static_cast<unsigned>(m)); }

inline std::vector<int> mask_indices(Mask m) {
  std::vector<int> out;
  for (int i = 0; i < 8; ++i)
    if (m >> i & 1) out.push_back(i);
  return out;
}

// e_S ^ e_T = wedge_sign(S,T) e_{S|T}; 0 when S and T overlap.
inline int wedge_sign(Mask s, Mask t) {
  if (s & t) return 0;
  int inv = 0;
  for (int i = 0; i < 8; ++i)
    if (t >> i & 1) inv += popcount(static_cast<Mask>(s >> (i + 1)));
  return (inv & 1) ? -1 : 1;
}

// Position of index i inside the sorted set m (number of smaller members).
inline int position_in(Mask m, int i) {
  return popcount(static_cast<Mask>(m & ((1u << i) - 1)));
}

// Orders index sets by cardinality, then lexicographically by members.
struct MaskLess {
  bool operator()(Mask a, Mask b) const {
    int pa = popcount(a), pb = popcount(b);
    if (pa != pb) return pa < pb;
    for (int i = 0; i < 8; ++i) {
      bool ia = a >> i & 1, ib = b >> i & 1;
      if (ia != ib) return ia;
    }
    return false;
  }
};

// All masks over n bits with exactly k members, ascending as integers
// within equal cardinality sorted lexicographically by index tuple.
inline std::vector<Mask> subsets(int n, int k) {
  std::vector<Mask> out;
  for (unsigned m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == k) out.push_back(static_cast<Mask>(m));
  std::sort(out.begin(), out.end(), MaskLess{});
  return out;
}

inline std::string mask_string(Mask m) {
  std::string s;
  for (int i : mask_indices(m)) s += static_cast<char>('1' + i);
  return s;
}

}  // namespace sl2pc
