#pragma once

#include <algorithm>
#include <vector>

namespace obstrukt {

// q-subsets of {0..n-1} as bitmasks, in increasing mask order. This is the
// basis order of every exterior power in the library.
inline std::vector<unsigned> subsets(int n, int q) {
  std::vector<unsigned> out;
  for (unsigned m = 0; m < (1u << n); ++m)
    if (__builtin_popcount(m) == q) out.push_back(m);
  return out;
}

inline int subset_index(const std::vector<unsigned>& basis, unsigned mask) {
  auto it = std::lower_bound(basis.begin(), basis.end(), mask);
  return it != basis.end() && *it == mask ? static_cast<int>(it - basis.begin()) : -1;
}

}  // namespace obstrukt
