#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace poolkit {

// Generator family is fixed (mt19937_64 + rejection sampling below), so the
// same seed and parameters give byte-identical output on every platform.
struct RngSeed {
  std::uint64_t value = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent derived stream (replicate index, chain index, ...).
inline RngSeed substream(RngSeed root, std::uint64_t index) {
  return RngSeed{splitmix64(root.value ^ (0x9e3779b97f4a7c15ULL * (index + 1)))};
}

class Rng {
 public:
  explicit Rng(RngSeed seed) : eng_(seed.value) {}

  std::uint64_t next() { return eng_(); }

  // Unbiased draw in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = eng_();
      if (x >= threshold) return x % bound;
    }
  }

  // [0,1) with 53 random bits.
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Sorted k-subset of {0,...,v-1} via Floyd's algorithm.
  std::vector<int> ksubset(int v, int k) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = v - k; j < v; ++j) {
      const int t = static_cast<int>(below(static_cast<std::uint64_t>(j) + 1));
      if (std::find(out.begin(), out.end(), t) != out.end())
        out.push_back(j);
      else
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Binomial(n, p) by CDF inversion; O(np + sqrt) expected.
  long binomial(long n, double p) {
    if (p <= 0.0 || n == 0) return 0;
    if (p >= 1.0) return n;
    if (p > 0.5) return n - binomial(n, 1.0 - p);
    const double q = 1.0 - p;
    const double ratio = p / q;
    double pmf = std::pow(q, static_cast<double>(n));
    // Guard against underflow of the starting pmf for huge n*p.
    if (pmf <= 0.0) {
      long count = 0;  // fall back to per-trial draws
      for (long i = 0; i < n; ++i)
        if (unit() < p) ++count;
      return count;
    }
    double u = unit();
    long x = 0;
    double cdf = pmf;
    while (u > cdf && x < n) {
      pmf *= ratio * static_cast<double>(n - x) / static_cast<double>(x + 1);
      ++x;
      cdf += pmf;
    }
    return x;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace poolkit
