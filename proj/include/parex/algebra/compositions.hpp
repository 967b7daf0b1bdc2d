#pragma once

#include <stdexcept>
#include <vector>

namespace parex::algebra {

// I_{n,h}: all h-tuples of positive integers summing to n, lexicographic.
// |I_{n,h}| = C(n-1, h-1).
inline std::vector<std::vector<int>> compositions(int n, int h) {
  if (n < 1) throw std::invalid_argument("compositions: n must be positive");
  if (h < 1 || h > n) throw std::invalid_argument("compositions: h out of range [1, n]");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(h);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos + 1 == h) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int i = 1; i <= rem - (h - pos - 1); ++i) {
      cur[pos] = i;
      self(self, pos + 1, rem - i);
    }
  };
  rec(rec, 0, n);
  return out;
}

}  // namespace parex::algebra
