#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mso/classes.hpp"

namespace mso {

namespace detail {

inline const std::vector<std::vector<int>>& all_perms(int n) {
  static std::map<int, std::vector<std::vector<int>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return cache.emplace(n, std::move(out)).first->second;
}

inline std::uint64_t relabel_mask(std::uint64_t m, const std::vector<int>& perm) {
  std::uint64_t out = 0;
  for (int i = 0; m >> i; ++i)
    if ((m >> i) & 1) out |= std::uint64_t{1} << perm[i];
  return out;
}

// Least relabelling of a family of element masks; families compare as
// sorted vectors.
inline std::vector<std::uint64_t> canon_mask_family(
    std::vector<std::uint64_t> fam, int n) {
  std::sort(fam.begin(), fam.end());
  std::vector<std::uint64_t> best = fam, cur(fam.size());
  for (const auto& p : all_perms(n)) {
    for (size_t i = 0; i < fam.size(); ++i) cur[i] = relabel_mask(fam[i], p);
    std::sort(cur.begin(), cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

inline void enum_guard(const ClassId& c, bool ok, int limit) {
  require(ok, "enumeration for " + class_name(c) + " supports universes up to " +
                  std::to_string(limit) + " elements");
}

}  // namespace detail

// Builds the string structure for the letter sequence `w` over alphabet k.
inline Structure string_structure(int k, const std::vector<int>& w) {
  Structure a = make_structure(
      vocabulary_of(class_id(ClassTag::Strings, k)), static_cast<int>(w.size()));
  for (size_t i = 0; i < w.size(); ++i)
    for (size_t j = i + 1; j < w.size(); ++j)
      a.tuples("lt").push_back({Slot{static_cast<int>(i)}, Slot{static_cast<int>(j)}});
  for (size_t i = 0; i < w.size(); ++i) {
    require(0 <= w[i] && w[i] < k, "letter out of range");
    a.tuples("letter" + std::to_string(w[i])).push_back({Slot{static_cast<int>(i)}});
  }
  a.normalize();
  return a;
}

// Recovers the letter sequence of a string structure.
inline std::vector<int> string_letters(const Structure& a) {
  int k = 0;
  while (a.voc.index("letter" + std::to_string(k)) >= 0) ++k;
  check_member(class_id(ClassTag::Strings, k), a, "string_letters");
  std::vector<int> before(a.n, 0);
  for (const auto& t : a.tuples("lt")) before[std::get<int>(t[1])]++;
  std::vector<int> pos_at(a.n);  // position -> element
  for (int x = 0; x < a.n; ++x) pos_at[before[x]] = x;
  std::vector<int> letter_of(a.n, -1);
  for (int l = 0; l < k; ++l)
    for (const auto& t : a.tuples("letter" + std::to_string(l)))
      letter_of[std::get<int>(t[0])] = l;
  std::vector<int> w(a.n);
  for (int i = 0; i < a.n; ++i) w[i] = letter_of[pos_at[i]];
  return w;
}

inline Structure graph_structure(int n, const std::vector<std::pair<int, int>>& edges) {
  Structure a = make_structure(vocabulary_of(class_id(ClassTag::GraphsEdge)), n);
  for (auto [x, y] : edges) {
    a.tuples("edge").push_back({Slot{x}, Slot{y}});
    a.tuples("edge").push_back({Slot{y}, Slot{x}});
  }
  a.normalize();
  return a;
}

// All members of the class with universe exactly n, one per isomorphism
// class.  Bounds are deliberately small: these enumerations back tests,
// sample corpora and the census cross-checks.
inline std::vector<Structure> enumerate_exact(const ClassId& c, int n) {
  require(n >= 1, "universe size must be positive");
  std::vector<Structure> out;
  switch (c.tag) {
    case ClassTag::Strings: {
      double total = 1;
      for (int i = 0; i < n; ++i) total *= c.param;
      detail::enum_guard(c, total <= (1 << 21), 21);
      std::vector<int> w(n, 0);
      while (true) {
        out.push_back(string_structure(c.param, w));
        int i = n - 1;
        while (i >= 0 && w[i] == c.param - 1) w[i--] = 0;
        if (i < 0) break;
        ++w[i];
      }
      break;
    }
    case ClassTag::Trees:
      detail::enum_guard(c, n <= 12, 12);
      for (const auto& t : generate_trees(n)) out.push_back(tree_to_structure(t));
      break;
    case ClassTag::BinaryTrees:
      detail::enum_guard(c, n <= 12, 12);
      for (const auto& t : generate_trees(n, 2)) out.push_back(tree_to_structure(t));
      break;
    case ClassTag::BoundedHeightTrees:
      detail::enum_guard(c, n <= 12, 12);
      for (const auto& t : generate_trees(n))
        if (t.height() <= c.param) out.push_back(tree_to_structure(t));
      break;
    case ClassTag::LabelledTrees:
      detail::enum_guard(c, n <= 8, 8);
      for (const auto& t : generate_labelled_trees(n, c.param))
        out.push_back(tree_to_structure(t, false, c.param));
      break;
    case ClassTag::OrderedTrees:
      detail::enum_guard(c, n <= 10, 10);
      for (const auto& t : generate_ordered_trees(n))
        out.push_back(tree_to_structure(t, true));
      break;
    case ClassTag::GraphsEdge:
    case ClassTag::AcyclicGraphs: {
      detail::enum_guard(c, n <= 6, 6);
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
      std::set<std::vector<std::uint64_t>> seen;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << pairs.size()); ++m) {
        std::vector<std::uint64_t> fam;
        std::vector<std::pair<int, int>> edges;
        for (size_t b = 0; b < pairs.size(); ++b)
          if ((m >> b) & 1) {
            edges.push_back(pairs[b]);
            fam.push_back((std::uint64_t{1} << pairs[b].first) |
                          (std::uint64_t{1} << pairs[b].second));
          }
        if (c.tag == ClassTag::AcyclicGraphs) {
          std::set<std::pair<int, int>> es;
          for (auto [x, y] : edges) es.insert({std::min(x, y), std::max(x, y)});
          if (!detail::graph_acyclic(n, es)) continue;
        }
        if (seen.insert(detail::canon_mask_family(fam, n)).second)
          out.push_back(graph_structure(n, edges));
      }
      break;
    }
    case ClassTag::GraphsIncidence: {
      detail::enum_guard(c, n <= 7, 7);
      Vocabulary voc = vocabulary_of(c);
      for (int v = 1; v <= n; ++v) {
        int e = n - v;
        if (e > v * (v - 1) / 2) continue;
        if (v > 6) {  // then e == 0: the edgeless graph
          out.push_back(make_structure(voc, n));
          continue;
        }
        for (const auto& g : enumerate_exact(class_id(ClassTag::GraphsEdge), v)) {
          std::set<std::pair<int, int>> edges;
          for (const auto& t : g.tuples("edge")) {
            int x = std::get<int>(t[0]), y = std::get<int>(t[1]);
            edges.insert({std::min(x, y), std::max(x, y)});
          }
          if (static_cast<int>(edges.size()) != e) continue;
          Structure a = make_structure(voc, n);
          int eid = v;
          for (const auto& [x, y] : edges) {
            a.tuples("inc").push_back({Slot{x}, Slot{eid}});
            a.tuples("inc").push_back({Slot{y}, Slot{eid}});
            ++eid;
          }
          a.normalize();
          out.push_back(std::move(a));
        }
      }
      break;
    }
    case ClassTag::Hypergraphs: {
      detail::enum_guard(c, n <= 4, 4);
      int subsets = 1 << n;
      std::set<std::vector<std::uint64_t>> seen;
      for (std::uint64_t fam_bits = 0;
           fam_bits < (std::uint64_t{1} << subsets); ++fam_bits) {
        std::vector<std::uint64_t> fam;
        for (int s = 0; s < subsets; ++s)
          if ((fam_bits >> s) & 1) fam.push_back(s);
        if (seen.insert(detail::canon_mask_family(fam, n)).second)
          out.push_back(hypergraph_structure(n, fam));
      }
      break;
    }
    case ClassTag::LaminarHypergraphs: {
      detail::enum_guard(c, n <= 5, 5);
      std::vector<std::uint64_t> pool;
      for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) pool.push_back(s);
      std::set<std::vector<std::uint64_t>> seen;
      std::vector<std::uint64_t> fam;
      auto rec = [&](auto&& self, size_t from) -> void {
        if (seen.insert(detail::canon_mask_family(fam, n)).second)
          out.push_back(hypergraph_structure(n, fam));
        for (size_t i = from; i < pool.size(); ++i) {
          bool ok = true;
          for (auto e : fam) {
            auto meet = e & pool[i];
            if (meet && meet != e && meet != pool[i]) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          fam.push_back(pool[i]);
          self(self, i + 1);
          fam.pop_back();
        }
      };
      rec(rec, 0);
      break;
    }
    case ClassTag::KUniformHypergraphs: {
      std::vector<std::uint64_t> ksets;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
        if (popcount(s) == c.param) ksets.push_back(s);
      detail::enum_guard(c, ksets.size() <= 20, 6);
      std::set<std::vector<std::uint64_t>> seen;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << ksets.size()); ++m) {
        std::vector<std::uint64_t> fam;
        for (size_t b = 0; b < ksets.size(); ++b)
          if ((m >> b) & 1) fam.push_back(ksets[b]);
        if (seen.insert(detail::canon_mask_family(fam, n)).second)
          out.push_back(hypergraph_structure(n, fam));
      }
      break;
    }
    case ClassTag::KAryRelations: {
      double tuples = 1;
      for (int i = 0; i < c.param; ++i) tuples *= n;
      require(tuples <= 18, "enumeration for " + class_name(c) +
                                " supports at most 18 tuple positions (n^k)");
      int t = static_cast<int>(tuples);
      std::vector<Tuple> all;
      std::vector<int> idx(c.param, 0);
      while (true) {
        Tuple tup;
        for (int s = 0; s < c.param; ++s) tup.emplace_back(idx[s]);
        all.push_back(tup);
        int i = c.param - 1;
        while (i >= 0 && idx[i] == n - 1) idx[i--] = 0;
        if (i < 0) break;
        ++idx[i];
      }
      std::set<Structure> seen;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << t); ++m) {
        Structure a = make_structure(vocabulary_of(c), n);
        for (int b = 0; b < t; ++b)
          if ((m >> b) & 1) a.rels[0].push_back(all[b]);
        a.normalize();
        if (seen.insert(canonical_form(a)).second) out.push_back(std::move(a));
      }
      break;
    }
    case ClassTag::BipartiteGraphs: {
      detail::enum_guard(c, n <= 5, 5);
      std::set<Structure> seen;
      for (std::uint64_t left = 0; left < (std::uint64_t{1} << n); ++left) {
        std::vector<std::pair<int, int>> cross;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (((left >> i) & 1) != ((left >> j) & 1)) cross.emplace_back(i, j);
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << cross.size()); ++m) {
          Structure a = make_structure(vocabulary_of(c), n);
          for (int i = 0; i < n; ++i)
            if ((left >> i) & 1) a.tuples("left").push_back({Slot{i}});
          for (size_t b = 0; b < cross.size(); ++b)
            if ((m >> b) & 1) {
              auto [x, y] = cross[b];
              a.tuples("edge").push_back({Slot{x}, Slot{y}});
              a.tuples("edge").push_back({Slot{y}, Slot{x}});
            }
          a.normalize();
          if (seen.insert(canonical_form(a)).second) out.push_back(std::move(a));
        }
      }
      break;
    }
    case ClassTag::Matrices: {
      detail::enum_guard(c, n <= 6, 6);
      for (int r = 1; r < n; ++r) {
        int cols = n - r;
        double total = 1;
        for (int i = 0; i < r * cols; ++i) total *= c.param;
        detail::enum_guard(c, total <= (1 << 21), 6);
        std::set<std::vector<std::vector<int>>> seen;
        std::vector<std::vector<int>> mat(r, std::vector<int>(cols, 0));
        // canonical representative under independent row and column perms
        auto canon = [&](const std::vector<std::vector<int>>& m) {
          std::vector<std::vector<int>> best;
          const auto& rp = detail::all_perms(r);
          const auto& cp = detail::all_perms(cols);
          for (const auto& pr : rp)
            for (const auto& pc : cp) {
              std::vector<std::vector<int>> cur(r, std::vector<int>(cols));
              for (int i = 0; i < r; ++i)
                for (int j = 0; j < cols; ++j) cur[pr[i]][pc[j]] = m[i][j];
              if (best.empty() || cur < best) best = std::move(cur);
            }
          return best;
        };
        while (true) {
          if (seen.insert(canon(mat)).second) {
            Structure a = make_structure(vocabulary_of(c), n);
            for (int i = 0; i < r; ++i)
              for (int j = 0; j < cols; ++j)
                a.tuples("entry" + std::to_string(mat[i][j]))
                    .push_back({Slot{i}, Slot{r + j}});
            a.normalize();
            out.push_back(std::move(a));
          }
          int i = r - 1, j = cols - 1;
          while (i >= 0 && mat[i][j] == c.param - 1) {
            mat[i][j] = 0;
            if (--j < 0) { j = cols - 1; --i; }
          }
          if (i < 0) break;
          ++mat[i][j];
        }
      }
      break;
    }
    case ClassTag::MatroidIndependence: {
      detail::enum_guard(c, n <= 6, 6);
      std::set<std::vector<std::uint64_t>> seen;
      for (int r = 0; r <= n; ++r) {
        std::vector<std::uint64_t> rsets;
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
          if (popcount(s) == r) rsets.push_back(s);
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << rsets.size()); ++m) {
          std::vector<std::uint64_t> bases;
          for (size_t b = 0; b < rsets.size(); ++b)
            if ((m >> b) & 1) bases.push_back(rsets[b]);
          // base exchange
          std::set<std::uint64_t> bset(bases.begin(), bases.end());
          bool ok = true;
          for (auto b1 : bases) {
            for (auto b2 : bases) {
              std::uint64_t only1 = b1 & ~b2;
              if (!only1) continue;
              for (int x = 0; x < n && ok; ++x) {
                if (!((only1 >> x) & 1)) continue;
                bool found = false;
                std::uint64_t only2 = b2 & ~b1;
                for (int y = 0; y < n && !found; ++y)
                  if ((only2 >> y) & 1)
                    found = bset.count((b1 & ~(std::uint64_t{1} << x)) |
                                       (std::uint64_t{1} << y)) > 0;
                ok = found;
              }
              if (!ok) break;
            }
            if (!ok) break;
          }
          if (!ok) continue;
          if (!seen.insert(detail::canon_mask_family(bases, n)).second) continue;
          // downward closure gives the independent sets
          std::set<std::uint64_t> indep;
          for (auto b : bases)
            for_each_subset(b, [&](std::uint64_t s) { indep.insert(s); });
          Structure a = make_structure(vocabulary_of(c), n);
          for (auto s : indep)
            a.tuples("indep").push_back({Slot{mask_to_set(s)}});
          a.normalize();
          out.push_back(std::move(a));
        }
      }
      break;
    }
    case ClassTag::MatroidNull: {
      int q = c.param;
      detail::enum_guard(c, (q == 2 && n <= 5) || (q == 3 && n <= 4) || n <= 3,
                         q == 2 ? 5 : 4);
      // enumerate subspaces of GF(q)^n by reduced echelon form
      std::set<std::vector<std::uint64_t>> seen;
      std::vector<gf::Mat> spaces = {{}};
      for (int r = 1; r <= n; ++r) {
        // choose pivot columns then free entries
        std::vector<int> pivots(r);
        auto pick = [&](auto&& self, int from, int depth) -> void {
          if (depth == r) {
            std::vector<std::pair<int, int>> free_cells;
            for (int i = 0; i < r; ++i)
              for (int col = pivots[i] + 1; col < n; ++col) {
                bool is_pivot = false;
                for (int j = 0; j < r; ++j)
                  if (pivots[j] == col) is_pivot = true;
                if (!is_pivot) free_cells.emplace_back(i, col);
              }
            std::vector<int> vals(free_cells.size(), 0);
            while (true) {
              gf::Mat m(r, gf::Vec(n, 0));
              for (int i = 0; i < r; ++i) m[i][pivots[i]] = 1;
              for (size_t fcell = 0; fcell < free_cells.size(); ++fcell)
                m[free_cells[fcell].first][free_cells[fcell].second] =
                    static_cast<std::uint8_t>(vals[fcell]);
              spaces.push_back(m);
              int i = static_cast<int>(free_cells.size()) - 1;
              while (i >= 0 && vals[i] == q - 1) vals[i--] = 0;
              if (i < 0) break;
              ++vals[i];
            }
            return;
          }
          for (int col = from; col < n; ++col) {
            pivots[depth] = col;
            self(self, col + 1, depth + 1);
          }
        };
        pick(pick, 0, 0);
      }
      for (const auto& basis : spaces) {
        // span members as base-q masks for canonical comparison
        std::vector<gf::Vec> span = {gf::Vec(n, 0)};
        for (const auto& b : basis) {
          std::vector<gf::Vec> next;
          for (const auto& v : span)
            for (int coef = 0; coef < q; ++coef) {
              gf::Vec w = v;
              for (int i = 0; i < n; ++i)
                w[i] = static_cast<std::uint8_t>(gf::add(w[i], gf::mul(coef, b[i], q), q));
              next.push_back(w);
            }
          sort_unique(next);
          span = std::move(next);
        }
        auto encode = [&](const std::vector<gf::Vec>& vs,
                          const std::vector<int>& perm) {
          std::vector<std::uint64_t> nums;
          for (const auto& v : vs) {
            std::uint64_t x = 0;
            for (int i = 0; i < n; ++i) x = x * q + v[perm[i]];
            nums.push_back(x);
          }
          std::sort(nums.begin(), nums.end());
          return nums;
        };
        std::vector<int> id(n);
        for (int i = 0; i < n; ++i) id[i] = i;
        std::vector<std::uint64_t> best = encode(span, id);
        for (const auto& p : detail::all_perms(n)) {
          auto cur = encode(span, p);
          if (cur < best) best = cur;
        }
        if (!seen.insert(best).second) continue;
        Structure a = make_structure(vocabulary_of(c), n);
        for (const auto& v : span) {
          Tuple t;
          for (int coef = 1; coef < q; ++coef) {
            SetSlot xs;
            for (int i = 0; i < n; ++i)
              if (v[i] == coef) xs.push_back(i);
            t.emplace_back(std::move(xs));
          }
          a.rels[0].push_back(std::move(t));
        }
        a.normalize();
        out.push_back(std::move(a));
      }
      break;
    }
    case ClassTag::Bool:
      require(n == 1, "Bool structures have a single element");
      out.push_back(bool_structure(false));
      out.push_back(bool_structure(true));
      break;
    case ClassTag::Pairs: {
      for (int a = 1; a < n; ++a) {
        int b = n - a;
        if (c.left->tag == ClassTag::Bool && a != 1) continue;
        if (c.right->tag == ClassTag::Bool && b != 1) continue;
        for (const auto& l : enumerate_exact(*c.left, a))
          for (const auto& r : enumerate_exact(*c.right, b))
            out.push_back(pair_structures(l, r));
      }
      break;
    }
  }
  return out;
}

// All members with universe between 1 and n, one per isomorphism class.
inline std::vector<Structure> enumerate_upto(const ClassId& c, int n) {
  std::vector<Structure> out;
  for (int m = 1; m <= n; ++m) {
    if (c.tag == ClassTag::Bool && m != 1) continue;
    if (c.tag == ClassTag::Matrices && m < 2) continue;
    if (c.tag == ClassTag::Pairs && m < 2) continue;
    auto part = enumerate_exact(c, m);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace mso
