#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "mso/bigint.hpp"
#include "mso/enumerate.hpp"

namespace mso {

namespace detail {

// Visits every partition of n as a descending list of parts, together with
// the number of permutations of [n] having that cycle type.
template <typename F>
void for_each_partition(int n, F&& fn) {
  BigUint nfact = BigUint::factorial(n);
  std::vector<int> parts;
  auto rec = [&](auto&& self, int remaining, int maxpart) -> void {
    if (remaining == 0) {
      BigUint count = nfact;  // n! / (prod part * prod mult!)
      for (int p : parts) count.div_small(p);
      int run = 1;
      for (size_t i = 1; i <= parts.size(); ++i) {
        if (i < parts.size() && parts[i] == parts[i - 1]) {
          count.div_small(++run);
        } else {
          run = 1;
        }
      }
      fn(parts, count);
      return;
    }
    for (int p = std::min(remaining, maxpart); p >= 1; --p) {
      parts.push_back(p);
      self(self, remaining - p, p);
      parts.pop_back();
    }
  };
  rec(rec, n, n);
}

// Orbits of the cyclic group generated by a permutation of cycle type
// `parts` acting on all subsets of the ground set.
inline std::uint64_t subset_orbits(const std::vector<int>& parts) {
  std::uint64_t lcm = 1;
  for (int p : parts) lcm = std::lcm<std::uint64_t>(lcm, p);
  std::uint64_t total = 0;
  for (std::uint64_t j = 0; j < lcm; ++j) {
    int cycles = 0;
    for (int p : parts) cycles += static_cast<int>(std::gcd<std::uint64_t>(p, j));
    total += std::uint64_t{1} << cycles;
  }
  require(total % lcm == 0, "orbit count must divide evenly");
  return total / lcm;
}

// Orbits of the cyclic group on k-element subsets.
inline std::uint64_t ksubset_orbits(const std::vector<int>& parts, int k) {
  std::uint64_t lcm = 1;
  for (int p : parts) lcm = std::lcm<std::uint64_t>(lcm, p);
  std::uint64_t total = 0;
  for (std::uint64_t j = 0; j < lcm; ++j) {
    // cycle lengths of sigma^j, then count invariant k-subsets by DP
    std::vector<std::uint64_t> dp(k + 1, 0);
    dp[0] = 1;
    for (int p : parts) {
      int g = static_cast<int>(std::gcd<std::uint64_t>(p, j));
      int len = p / g;  // g cycles of this length
      for (int rep = 0; rep < g; ++rep)
        for (int s = k; s >= len; --s) dp[s] += dp[s - len];
    }
    total += dp[k];
  }
  require(total % lcm == 0, "orbit count must divide evenly");
  return total / lcm;
}

// Orbits of a permutation on unordered pairs of distinct elements.
inline std::uint64_t pair_orbits(const std::vector<int>& parts) {
  std::uint64_t o = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    o += parts[i] / 2;
    for (size_t j = i + 1; j < parts.size(); ++j)
      o += std::gcd(parts[i], parts[j]);
  }
  return o;
}

// Orbits of a permutation on k-tuples over the ground set.
inline std::uint64_t tuple_orbits(const std::vector<int>& parts, int k) {
  std::vector<int> picks(k, 0);
  std::uint64_t total = 0;
  auto rec = [&](auto&& self, int depth) -> void {
    if (depth == k) {
      std::uint64_t prod = 1, lcm = 1;
      for (int i = 0; i < k; ++i) {
        prod *= parts[picks[i]];
        lcm = std::lcm<std::uint64_t>(lcm, parts[picks[i]]);
      }
      total += prod / lcm;
      return;
    }
    for (size_t i = 0; i < parts.size(); ++i) {
      picks[depth] = static_cast<int>(i);
      self(self, depth + 1);
    }
  };
  rec(rec, 0);
  return total;
}

// Euler-transform step shared by the tree recurrences: given counts a(m) of
// components, f(n) counts multisets with total size n.
inline std::vector<BigUint> euler_forest(const std::vector<BigUint>& a, int n) {
  std::vector<BigUint> f(n + 1);
  f[0] = BigUint(1);
  std::vector<BigUint> c(n + 1);
  for (int N = 1; N <= n; ++N)
    for (int d = 1; d <= N; ++d)
      if (N % d == 0 && d < static_cast<int>(a.size())) {
        BigUint t = a[d];
        t.mul_small(d);
        c[N] += t;
      }
  for (int m = 1; m <= n; ++m) {
    BigUint sum;
    for (int N = 1; N <= m; ++N) sum += c[N] * f[m - N];
    std::uint64_t rem = sum.div_small(m);
    require(rem == 0, "tree recurrence must divide evenly");
    f[m] = std::move(sum);
  }
  return f;
}

// Rooted trees with k-coloured nodes, exactly n nodes.
inline std::vector<BigUint> coloured_tree_counts(int n, int k) {
  std::vector<BigUint> a(n + 1);
  for (int m = 1; m <= n; ++m) {
    auto f = euler_forest(a, m - 1);
    a[m] = f[m - 1];
    a[m].mul_small(k);
  }
  return a;
}

// Rooted trees of height at most h (counted by edges on the longest path).
inline std::vector<BigUint> bounded_height_tree_counts(int n, int h) {
  std::vector<BigUint> a(n + 1);
  a[1] = BigUint(1);  // height 0
  for (int level = 1; level <= h; ++level) {
    std::vector<BigUint> next(n + 1);
    for (int m = 1; m <= n; ++m) {
      auto f = euler_forest(a, m - 1);
      next[m] = f[m - 1];
    }
    a = std::move(next);
  }
  return a;
}

// Unordered trees with at most two children per node.
inline std::vector<BigUint> binary_tree_counts(int n) {
  std::vector<BigUint> t(n + 1);
  if (n >= 1) t[1] = BigUint(1);
  for (int m = 2; m <= n; ++m) {
    BigUint total = t[m - 1];  // single child
    for (int a = 1; 2 * a < m - 1; ++a) total += t[a] * t[m - 1 - a];
    if ((m - 1) % 2 == 0) {
      int half = (m - 1) / 2;
      // unordered pair with repetition: t(t+1)/2
      BigUint pairs = t[half] * (t[half] + BigUint(1));
      pairs.div_small(2);
      total += pairs;
    }
    t[m] = std::move(total);
  }
  return t;
}

inline BigUint catalan(int m) {
  // binom(2m, m) / (m + 1)
  BigUint r(1);
  for (int i = 0; i < m; ++i) r.mul_small(2 * m - i);
  for (int i = 2; i <= m; ++i) r.div_small(i);
  r.div_small(m + 1);
  return r;
}

}  // namespace detail

struct CensusResult {
  BigUint count;
  std::string method;
};

// Number of isomorphism classes with universe exactly n.
inline CensusResult census_exact(const ClassId& c, int n) {
  require(n >= 1, "census needs a positive universe size");
  auto by_enumeration = [&](int bound) -> CensusResult {
    require(n <= bound, "census for " + class_name(c) +
                            " supports universes up to " + std::to_string(bound));
    return {BigUint(enumerate_exact(c, n).size()), "enumeration"};
  };
  switch (c.tag) {
    case ClassTag::Strings:
      return {BigUint::pow(c.param, n), "formula"};
    case ClassTag::Trees: {
      require(n <= 64, "census for Trees supports universes up to 64");
      auto a = detail::coloured_tree_counts(n, 1);
      return {a[n], "recurrence"};
    }
    case ClassTag::LabelledTrees: {
      require(n <= 64, "census for LabelledTrees supports universes up to 64");
      auto a = detail::coloured_tree_counts(n, c.param);
      return {a[n], "recurrence"};
    }
    case ClassTag::OrderedTrees:
      require(n <= 64, "census for OrderedTrees supports universes up to 64");
      return {detail::catalan(n - 1), "formula"};
    case ClassTag::BinaryTrees: {
      require(n <= 64, "census for BinaryTrees supports universes up to 64");
      auto t = detail::binary_tree_counts(n);
      return {t[n], "recurrence"};
    }
    case ClassTag::BoundedHeightTrees: {
      require(n <= 64, "census for BoundedHeightTrees supports universes up to 64");
      auto a = detail::bounded_height_tree_counts(n, c.param);
      return {a[n], "recurrence"};
    }
    case ClassTag::GraphsEdge: {
      require(n <= 48, "census for GraphsEdge supports universes up to 48");
      BigUint total;
      detail::for_each_partition(n, [&](const std::vector<int>& parts,
                                        const BigUint& count) {
        total += count * BigUint::pow2(detail::pair_orbits(parts));
      });
      std::uint64_t rem = 0;
      for (int i = 2; i <= n; ++i) rem |= total.div_small(i);
      require(rem == 0, "orbit sum must divide n!");
      return {total, "orbit-count"};
    }
    case ClassTag::Hypergraphs: {
      require(n <= 21, "census for Hypergraphs supports universes up to 21");
      BigUint total;
      detail::for_each_partition(n, [&](const std::vector<int>& parts,
                                        const BigUint& count) {
        total += count * BigUint::pow2(detail::subset_orbits(parts));
      });
      for (int i = 2; i <= n; ++i) total.div_small(i);
      return {total, "orbit-count"};
    }
    case ClassTag::KUniformHypergraphs: {
      require(n <= 40, "census for KUniformHypergraphs supports universes up to 40");
      BigUint total;
      detail::for_each_partition(n, [&](const std::vector<int>& parts,
                                        const BigUint& count) {
        total += count * BigUint::pow2(detail::ksubset_orbits(parts, c.param));
      });
      for (int i = 2; i <= n; ++i) total.div_small(i);
      return {total, "orbit-count"};
    }
    case ClassTag::KAryRelations: {
      require(n <= 21, "census for KAryRelations supports universes up to 21");
      BigUint total;
      detail::for_each_partition(n, [&](const std::vector<int>& parts,
                                        const BigUint& count) {
        total += count * BigUint::pow2(detail::tuple_orbits(parts, c.param));
      });
      for (int i = 2; i <= n; ++i) total.div_small(i);
      return {total, "orbit-count"};
    }
    case ClassTag::Matrices: {
      // rows and columns permute independently; average the fixed counts
      // q^(orbits on the grid) over both symmetric groups, per shape
      require(n <= 16, "census for Matrices supports universes up to 16");
      BigUint grand;
      for (int r = 1; r < n; ++r) {
        int cols = n - r;
        BigUint split;
        detail::for_each_partition(r, [&](const std::vector<int>& rp,
                                          const BigUint& rc) {
          detail::for_each_partition(cols, [&](const std::vector<int>& cp,
                                               const BigUint& cc) {
            std::uint64_t orbits = 0;
            for (int a : rp)
              for (int b : cp) orbits += std::gcd(a, b);
            split += rc * cc * BigUint::pow(c.param, orbits);
          });
        });
        for (int i = 2; i <= r; ++i) split.div_small(i);
        for (int i = 2; i <= cols; ++i) split.div_small(i);
        grand += split;
      }
      return {grand, "orbit-count"};
    }
    case ClassTag::GraphsIncidence:
      return by_enumeration(7);
    case ClassTag::AcyclicGraphs:
      return by_enumeration(6);
    case ClassTag::LaminarHypergraphs:
      return by_enumeration(5);
    case ClassTag::BipartiteGraphs:
      return by_enumeration(5);
    case ClassTag::MatroidIndependence:
      return by_enumeration(6);
    case ClassTag::MatroidNull:
      return by_enumeration(c.param == 2 ? 5 : 4);
    case ClassTag::Bool:
      return {BigUint(n == 1 ? 2 : 0), "formula"};
    case ClassTag::Pairs: {
      BigUint total;
      for (int a = 1; a < n; ++a) {
        int b = n - a;
        if (c.left->tag == ClassTag::Bool && a != 1) continue;
        if (c.right->tag == ClassTag::Bool && b != 1) continue;
        BigUint la = census_exact(*c.left, a).count;
        BigUint rb = census_exact(*c.right, b).count;
        total += la * rb;
      }
      return {total, "product"};
    }
  }
  fail("unhandled class tag in census");
}

// Number of isomorphism classes with universe size between 1 and n.
inline CensusResult census(const ClassId& c, int n) {
  BigUint total;
  std::string method;
  for (int m = 1; m <= n; ++m) {
    auto r = census_exact(c, m);
    total += r.count;
    method = r.method;
  }
  return {total, method};
}

}  // namespace mso
