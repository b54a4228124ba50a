#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mso {

// Domain error: malformed input, unmet precondition, exceeded budget.
// The command line front end maps these to exit code 1; usage errors
// (bad flags, unreadable files) are reported separately with exit code 2.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw error(msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

// Work limits for the brute-force evaluators.  `logic` bounds
// (set-quantifier depth) * (universe size) in formula evaluation,
// `colour_fanout` bounds the number of structures a single colouring step
// may emit, and `steps` is a generic cap on enumeration loops so that
// oversized inputs fail fast instead of running forever.
struct Budget {
  int logic = 24;
  std::int64_t colour_fanout = 16384;
  std::int64_t steps = 200'000'000;
};

inline Budget default_budget() {
  Budget b;
  if (const char* env = std::getenv("MSO_BUDGET")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) b.logic = static_cast<int>(v);
  }
  return b;
}

// Deterministic RNG used by every sampled corpus; seeds are always explicit.
using Rng = std::mt19937_64;

inline int popcount(std::uint64_t m) { return std::popcount(m); }

// All subsets of `mask`, ascending as integers.
template <typename F>
void for_each_subset(std::uint64_t mask, F&& f) {
  std::uint64_t sub = 0;
  while (true) {
    f(sub);
    if (sub == mask) break;
    sub = (sub - mask) & mask;
  }
}

inline std::vector<int> mask_to_set(std::uint64_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) out.push_back(i);
  return out;
}

inline std::uint64_t set_to_mask(const std::vector<int>& xs) {
  std::uint64_t m = 0;
  for (int x : xs) m |= std::uint64_t{1} << x;
  return m;
}

template <typename T>
void sort_unique(std::vector<T>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace mso
