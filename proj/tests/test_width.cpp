#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "mso/width.hpp"

using namespace mso;

namespace {

Hypergraph hg(int n, const std::vector<std::vector<int>>& edges) {
  return make_hypergraph(n, edges);
}

// Dense reference for the cut invariants: builds the full 2^|U| x 2^(n-|U|)
// membership matrix as machine words, n - |U| <= 6.
std::vector<std::uint64_t> dense_rows(const Hypergraph& g, std::uint64_t u_mask) {
  std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
  std::uint64_t comp = full & ~u_mask;
  std::vector<std::uint64_t> xs, zs;
  for (std::uint64_t m = 0; m <= full; ++m) {
    if ((m & ~u_mask) == 0) xs.push_back(m);
    if ((m & ~comp) == 0) zs.push_back(m);
  }
  REQUIRE(zs.size() <= 64);
  std::vector<std::uint64_t> rows;
  for (std::uint64_t x : xs) {
    std::uint64_t row = 0;
    for (size_t j = 0; j < zs.size(); ++j)
      if (std::binary_search(g.edges.begin(), g.edges.end(), x | zs[j]))
        row |= std::uint64_t{1} << j;
    rows.push_back(row);
  }
  return rows;
}

int dense_rank(const Hypergraph& g, std::uint64_t u_mask) {
  auto rows = dense_rows(g, u_mask);
  int rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot] >> bit & 1)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (size_t i = 0; i < rows.size(); ++i)
      if (i != static_cast<size_t>(rank) && (rows[i] >> bit & 1)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

int dense_classes(const Hypergraph& g, std::uint64_t u_mask) {
  auto rows = dense_rows(g, u_mask);
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return static_cast<int>(rows.size());
}

Hypergraph random_hypergraph(Rng& rng, int n, double p) {
  Hypergraph g{n, {}};
  std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::uint64_t m = 0; m <= full; ++m)
    if (coin(rng) < p) g.edges.push_back(m);
  return g;
}

// Every hyperedge family on n vertices, as a bitmask over the 2^n subsets.
template <typename F>
void for_each_hypergraph(int n, F&& f) {
  std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t family = 0; family < (std::uint64_t{1} << subsets); ++family) {
    Hypergraph g{n, {}};
    for (std::uint64_t m = 0; m < subsets; ++m)
      if (family >> m & 1) g.edges.push_back(m);
    f(g);
  }
}

// Depth-first leaf order of t rooted at the given edge, mirroring the
// documented compilation conventions (default root edge: minimal larger side,
// then least endpoint pair; smaller endpoint first; children by node id).
std::vector<int> rooted_leaf_order(const BranchDecomposition& t, int root_edge) {
  if (t.leaves == 1) return {0};
  if (root_edge == -1) {
    int best_larger = 0;
    std::pair<int, int> best_pair;
    for (size_t i = 0; i < t.edges.size(); ++i) {
      std::uint64_t side = detail::leaf_side(t, i, true);
      int larger = std::max(popcount(side), t.leaves - popcount(side));
      std::pair<int, int> pair = std::minmax(t.edges[i].first, t.edges[i].second);
      if (root_edge == -1 || larger < best_larger ||
          (larger == best_larger && pair < best_pair)) {
        root_edge = static_cast<int>(i);
        best_larger = larger;
        best_pair = pair;
      }
    }
  }
  int nodes = 2 * t.leaves - 2;
  std::vector<std::vector<int>> adj(nodes);
  for (auto [u, v] : t.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> order;
  auto rec = [&](auto&& self, int w, int parent) -> void {
    if (w < t.leaves) {
      order.push_back(w);
      return;
    }
    std::vector<int> kids;
    for (int nb : adj[w])
      if (nb != parent) kids.push_back(nb);
    std::sort(kids.begin(), kids.end());
    for (int kid : kids) self(self, kid, w);
  };
  auto [u, v] = t.edges[root_edge];
  rec(rec, std::min(u, v), std::max(u, v));
  rec(rec, std::max(u, v), std::min(u, v));
  return order;
}

// Compile at the given root, decode, and compare against the relabelling the
// leaf order dictates.
void check_round_trip(const Hypergraph& g, const BranchDecomposition& t,
                      int root_edge) {
  CompiledDecomposition s = compile_decomposition(g, t, root_edge);
  Hypergraph decoded = decode_decomposition(s);
  std::vector<int> order = rooted_leaf_order(t, root_edge);
  std::vector<int> perm(g.n);
  for (int j = 0; j < g.n; ++j) perm[order[j]] = j;
  Hypergraph expected = permute_hypergraph(g, perm);
  REQUIRE(decoded.n == expected.n);
  REQUIRE(decoded.edges == expected.edges);
}

std::vector<BranchDecomposition> all_trees(int n) {
  std::vector<BranchDecomposition> out;
  detail::for_each_cubic_tree(n, [&](const std::vector<std::pair<int, int>>& edges) {
    out.push_back({n, edges});
  });
  return out;
}

RepresentedMatroid triangle() {
  return {2, 3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}};
}

RepresentedMatroid basis_vectors(int n) {
  RepresentedMatroid m{2, n, {}};
  for (int i = 0; i < n; ++i) {
    gf::Vec v(n, 0);
    v[i] = 1;
    m.vectors.push_back(v);
  }
  return m;
}

template <typename F>
void for_each_gf2_matroid(int n, int d, F&& f) {
  int bits = n * d;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    RepresentedMatroid m{2, d, gf::Mat(n, gf::Vec(d, 0))};
    for (int i = 0; i < bits; ++i)
      if ((code >> i) & 1) m.vectors[i / d][i % d] = 1;
    f(m);
  }
}

}  // namespace

TEST_CASE("hypergraph construction and json round trip") {
  Hypergraph g = hg(4, {{2, 3}, {0, 1}});
  CHECK(g.edges == std::vector<std::uint64_t>{0b0011, 0b1100});
  Json j = hypergraph_to_json(g);
  CHECK(j["edges"][0] == Json::array({0, 1}));
  CHECK(hypergraph_from_json(j).edges == g.edges);

  CHECK(hg(2, {{}}).edges == std::vector<std::uint64_t>{0});  // the empty edge
  CHECK_THROWS_AS(hg(2, {{0, 2}}), error);
  CHECK_THROWS_AS(hg(2, {{0, 0}}), error);
  CHECK_THROWS_AS(hg(2, {{0, 1}, {1, 0}}), error);
  CHECK_THROWS_AS(check_hypergraph({63, {}}), error);
  CHECK_THROWS_AS(hypergraph_from_json(Json{{"n", 2}}), error);
  CHECK_THROWS_AS(hypergraph_from_json(Json{{"n", 2}, {"edges", {{"a"}}}}), error);
}

TEST_CASE("vertex permutations relabel hyperedges") {
  Hypergraph g = hg(3, {{0, 1}, {2}});
  Hypergraph rotated = permute_hypergraph(g, {1, 2, 0});
  CHECK(rotated.edges == hg(3, {{1, 2}, {0}}).edges);
  CHECK(permute_hypergraph(rotated, {2, 0, 1}).edges == g.edges);
  CHECK_THROWS_AS(permute_hypergraph(g, {0, 1}), error);
  CHECK_THROWS_AS(permute_hypergraph(g, {0, 1, 1}), error);

  CHECK(hypergraphs_isomorphic(g, hg(3, {{1, 2}, {0}})));
  CHECK_FALSE(hypergraphs_isomorphic(g, hg(3, {{0, 1}, {0}})));
  CHECK_FALSE(hypergraphs_isomorphic(g, hg(4, {{0, 1}, {2}})));
}

TEST_CASE("bipartition rank matches a dense elimination oracle") {
  for_each_hypergraph(3, [&](const Hypergraph& g) {
    for (std::uint64_t u = 0; u < 8; ++u) {
      CHECK(bipartition_rank(g, u) == dense_rank(g, u));
      CHECK(bipartition_rank(g, u) == bipartition_rank(g, 7 & ~u));
    }
  });
  Rng rng(2026);
  for (int n = 4; n <= 6; ++n) {
    for (int trial = 0; trial < 120; ++trial) {
      Hypergraph g = random_hypergraph(rng, n, trial % 2 ? 0.3 : 0.6);
      std::uint64_t full = (std::uint64_t{1} << n) - 1;
      for (std::uint64_t u = 0; u <= full; ++u) {
        CHECK(bipartition_rank(g, u) == dense_rank(g, u));
        CHECK(bipartition_rank(g, u) == bipartition_rank(g, full & ~u));
      }
    }
  }
}

TEST_CASE("bipartition rank frozen examples") {
  Hypergraph none = hg(4, {});
  Hypergraph all = hg(4, {{0, 1, 2, 3}});
  for (std::uint64_t u = 0; u < 16; ++u) {
    CHECK(bipartition_rank(none, u) == 0);
    CHECK(bipartition_rank(all, u) == 1);  // exactly one 1-entry
  }
  Hypergraph pairs = hg(4, {{0, 1}, {2, 3}});
  CHECK(bipartition_rank(pairs, std::vector<int>{0, 1}) == 2);
  CHECK(bipartition_rank(pairs, std::vector<int>{0, 2}) == 2);
  CHECK(bipartition_rank(pairs, std::vector<int>{0}) == 2);
}

TEST_CASE("sensitivity counts the distinct membership rows") {
  for_each_hypergraph(3, [&](const Hypergraph& g) {
    for (std::uint64_t u = 0; u < 8; ++u)
      CHECK(sensitivity(g, u) == dense_classes(g, u));
  });
  Rng rng(77);
  for (int n = 4; n <= 6; ++n) {
    for (int trial = 0; trial < 120; ++trial) {
      Hypergraph g = random_hypergraph(rng, n, trial % 2 ? 0.25 : 0.7);
      std::uint64_t full = (std::uint64_t{1} << n) - 1;
      CHECK(sensitivity(g, std::uint64_t{0}) == 1);
      for (std::uint64_t u = 0; u <= full; ++u) {
        int s = sensitivity(g, u);
        int r = bipartition_rank(g, u);
        CHECK(s == dense_classes(g, u));
        CHECK(r <= s);
        CHECK(s <= (1 << r));
      }
    }
  }
  Hypergraph none = hg(5, {});
  for (std::uint64_t u = 0; u < 32; ++u) CHECK(sensitivity(none, u) == 1);
}

TEST_CASE("cut operations reject oversized sides") {
  Hypergraph wide = make_hypergraph(50, {{0, 1}, {30, 40}});
  std::uint64_t half = (std::uint64_t{1} << 25) - 1;
  CHECK_THROWS_AS(bipartition_rank(wide, half), error);
  CHECK_THROWS_AS(sensitivity(wide, half), error);
  CHECK_THROWS_AS(bipartition_rank(hg(2, {}), std::uint64_t{4}), error);
  // A thin side stays within the bound even on a wide vertex set: the rows
  // for {0} and {30} are independent and everything else is the zero row.
  CHECK(bipartition_rank(wide, std::vector<int>{0, 30}) == 2);
  CHECK(sensitivity(wide, std::vector<int>{0, 30}) == 3);
}

TEST_CASE("hyper-rankwidth frozen examples") {
  HyperRankwidthResult pairs = hyper_rankwidth(hg(4, {{0, 1}, {2, 3}}));
  CHECK(pairs.width == 2);  // exhaustive oracle over all trees on 4 leaves
  check_decomposition(pairs.decomposition);
  CHECK(pairs.decomposition.leaves == 4);

  CHECK(hyper_rankwidth(hg(4, {})).width == 0);
  CHECK(hyper_rankwidth(hg(4, {{0, 1, 2, 3}})).width == 1);
  CHECK(hyper_rankwidth(hg(1, {{0}})).width == 0);
  CHECK(hyper_rankwidth(hg(1, {{0}})).decomposition.edges.empty());
  CHECK_THROWS_AS(hyper_rankwidth(Hypergraph{10, {}}), error);
}

TEST_CASE("hyper-rankwidth witness is optimal") {
  Rng rng(411);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + trial % 3;
    Hypergraph g = random_hypergraph(rng, n, 0.4);
    HyperRankwidthResult res = hyper_rankwidth(g);
    std::uint64_t full = (std::uint64_t{1} << n) - 1;
    int witness = 0;
    for (size_t i = 0; i < res.decomposition.edges.size(); ++i) {
      std::uint64_t side = detail::leaf_side(res.decomposition, i, true);
      if (side == 0 || side == full) continue;
      witness = std::max(witness, bipartition_rank(g, side));
    }
    CHECK(witness == res.width);
    int brute = -1;
    for (const auto& t : all_trees(n)) {
      int width = 0;
      for (size_t i = 0; i < t.edges.size(); ++i) {
        std::uint64_t side = detail::leaf_side(t, i, true);
        if (side == 0 || side == full) continue;
        width = std::max(width, bipartition_rank(g, side));
      }
      if (brute == -1 || width < brute) brute = width;
    }
    CHECK(res.width == brute);
  }
}

TEST_CASE("hyper-rankwidth is permutation invariant and deterministic") {
  Rng rng(97);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 4 + trial % 3;
    Hypergraph g = random_hypergraph(rng, n, 0.35);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(hyper_rankwidth(permute_hypergraph(g, perm)).width ==
          hyper_rankwidth(g).width);
    CHECK(hyper_rankwidth(g).decomposition.edges ==
          hyper_rankwidth(g).decomposition.edges);
  }
}

TEST_CASE("compiling a single vertex") {
  BranchDecomposition leaf{1, {}};

  CompiledDecomposition plain = compile_decomposition(hg(1, {}), leaf);
  CHECK(plain.k == 0);
  CHECK(plain.accepting.empty());
  REQUIRE(plain.nodes.size() == 1);
  CHECK(plain.nodes[0].colour_empty == 1);
  CHECK(plain.nodes[0].colour_single == 1);

  // Only {0} is a hyperedge, so the two leaf sets get distinct colours.
  CompiledDecomposition point = compile_decomposition(hg(1, {{0}}), leaf);
  CHECK(point.k == 1);
  CHECK(point.nodes[0].colour_empty == 1);
  CHECK(point.nodes[0].colour_single == 2);
  CHECK(point.accepting == std::vector<int>{2});
  CHECK(decode_decomposition(point).edges == std::vector<std::uint64_t>{1});

  // Both subsets are hyperedges: one class again, this time accepting.
  Hypergraph both{1, {0, 1}};
  CompiledDecomposition full = compile_decomposition(both, leaf);
  CHECK(full.k == 0);
  CHECK(full.nodes[0].colour_single == 1);
  CHECK(full.accepting == std::vector<int>{1});
  CHECK(decode_decomposition(full).edges == both.edges);
}

TEST_CASE("compiling two vertices by hand") {
  Hypergraph g = hg(2, {{0, 1}});
  BranchDecomposition t{2, {{0, 1}}};
  CompiledDecomposition s = compile_decomposition(g, t, 0);
  Json expected = Json::parse(R"({
    "k": 1,
    "accepting": [2],
    "tree": {
      "alpha": [[1, 1], [1, 2]],
      "children": [{"colours": [1, 2]}, {"colours": [1, 2]}]
    }
  })");
  CHECK(compiled_to_json(s) == expected);
  CHECK(decode_decomposition(s).edges == g.edges);
  CHECK(compiled_to_json(compiled_from_json(expected)) == expected);
}

TEST_CASE("no hyperedges compile to a single colour") {
  for (const auto& t : all_trees(4)) {
    CompiledDecomposition s = compile_decomposition(hg(4, {}), t);
    CHECK(s.k == 0);
    CHECK(s.accepting.empty());
    for (const auto& node : s.nodes) {
      if (node.is_leaf()) {
        CHECK(node.colour_empty == 1);
        CHECK(node.colour_single == 1);
      } else {
        CHECK(node.alpha == std::vector<std::vector<int>>{{1}});
      }
    }
    CHECK(decode_decomposition(s).edges.empty());
  }
}

TEST_CASE("compilation rejects unusable parameters") {
  Hypergraph g = hg(2, {{0, 1}});
  BranchDecomposition t{2, {{0, 1}}};
  CHECK_THROWS_AS(compile_decomposition(g, t, -1, 0), error);  // needs two colours
  CHECK(compile_decomposition(g, t, -1, 3).k == 3);
  CHECK_THROWS_AS(compile_decomposition(g, t, -1, 9), error);
  CHECK_THROWS_AS(compile_decomposition(g, t, 5), error);
  CHECK_THROWS_AS(compile_decomposition(hg(3, {}), t), error);
  CHECK_THROWS_AS(compile_decomposition(hg(1, {}), BranchDecomposition{1, {}}, 0),
                  error);
}

TEST_CASE("compile and decode round trip") {
  for (int n = 1; n <= 3; ++n) {
    for_each_hypergraph(n, [&](const Hypergraph& g) {
      for (const auto& t : all_trees(n)) {
        if (t.edges.empty()) {
          check_round_trip(g, t, -1);
          continue;
        }
        for (size_t e = 0; e < t.edges.size(); ++e)
          check_round_trip(g, t, static_cast<int>(e));
      }
    });
  }
  Rng rng(5150);
  auto trees4 = all_trees(4);
  for (int trial = 0; trial < 400; ++trial) {
    Hypergraph g = random_hypergraph(rng, 4, 0.5);
    for (const auto& t : trees4) {
      check_round_trip(g, t, -1);
      check_round_trip(g, t, 0);
    }
  }
  auto trees5 = all_trees(5);
  for (int trial = 0; trial < 120; ++trial) {
    Hypergraph g = random_hypergraph(rng, 5, 0.4);
    for (const auto& t : trees5) check_round_trip(g, t, -1);
    CHECK(hypergraphs_isomorphic(
        decode_decomposition(compile_decomposition(g, trees5[trial % 15])), g));
  }
  for (int n = 6; n <= 7; ++n) {
    auto trees = all_trees(n);
    for (int trial = 0; trial < (n == 6 ? 40 : 20); ++trial) {
      Hypergraph g = random_hypergraph(rng, n, 0.3);
      for (size_t i = trial % 11; i < trees.size(); i += trees.size() / 7)
        check_round_trip(g, trees[i], -1);
    }
  }
}

TEST_CASE("automatic colour budgets are minimal") {
  Rng rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + trial % 3;
    Hypergraph g = random_hypergraph(rng, n, 0.5);
    auto trees = all_trees(n);
    const auto& t = trees[trial % trees.size()];
    CompiledDecomposition s = compile_decomposition(g, t);
    if (s.k > 0)
      CHECK_THROWS_AS(compile_decomposition(g, t, -1, s.k - 1), error);
    CHECK(compile_decomposition(g, t, -1, s.k + 1).k == s.k + 1);
  }
}

TEST_CASE("compiled decomposition json validation") {
  Json good = Json::parse(R"({
    "k": 1,
    "accepting": [2],
    "tree": {
      "alpha": [[1, 1], [1, 2]],
      "children": [{"colours": [1, 2]}, {"colours": [1, 2]}]
    }
  })");
  CHECK(compiled_to_json(compiled_from_json(good)) == good);

  auto reject = [&](const char* pointer, Json value) {
    Json bad = good;
    bad[Json::json_pointer(pointer)] = value;
    CHECK_THROWS_AS(compiled_from_json(bad), error);
  };
  reject("/k", 9);
  reject("/accepting", Json::array({3}));
  reject("/accepting", Json::array({2, 1}));
  reject("/tree/alpha", Json::array({Json::array({1, 1})}));
  reject("/tree/alpha/1/1", 0);
  reject("/tree/children/0/colours", Json::array({1}));
  reject("/tree/children", Json::array({Json{{"colours", {1, 2}}}}));
}

TEST_CASE("decoding hand-built automata") {
  CompiledDecomposition s;
  s.k = 1;
  s.nodes.resize(3);
  s.nodes[0] = {1, 2, 0, 0, {{1, 1}, {1, 1}}};
  s.nodes[1] = {-1, -1, 1, 2, {}};
  s.nodes[2] = {-1, -1, 1, 2, {}};

  // Constant tables with a non-accepting root recognize nothing.
  CHECK(decode_decomposition(s).edges.empty());
  s.accepting = {1};
  CHECK(decode_decomposition(s).edges ==
        std::vector<std::uint64_t>{0, 1, 2, 3});
  s.accepting = {2};
  CHECK(decode_decomposition(s).edges.empty());

  Hypergraph once = decode_decomposition(s);
  Hypergraph twice = decode_decomposition(s);
  CHECK(once.n == twice.n);
  CHECK(once.edges == twice.edges);
}

TEST_CASE("matroid sensitivity frozen examples") {
  CHECK(matroid_sensitivity(triangle(), std::uint64_t{0}) == 1);
  CHECK(matroid_sensitivity(triangle(), std::vector<int>{0}) == 2);
  for (std::uint64_t u = 0; u < 8; ++u)
    CHECK(matroid_sensitivity(basis_vectors(3), u) == 1);
  CHECK_THROWS_AS(matroid_sensitivity(basis_vectors(17), std::uint64_t{1}), error);
  CHECK(matroid_sensitivity(triangle(), std::uint64_t{1}) ==
        sensitivity(independence_hypergraph(triangle()), std::uint64_t{1}));
}

TEST_CASE("connectivity bounds matroid sensitivity") {
  auto check_bounds = [](const RepresentedMatroid& m) {
    Hypergraph h = independence_hypergraph(m);
    std::string desc = "q=" + std::to_string(m.q);
    for (const auto& v : m.vectors) {
      desc += " ";
      for (int c : v) desc += std::to_string(c);
    }
    std::uint64_t full = (std::uint64_t{1} << m.n()) - 1;
    REQUIRE(sensitivity(h, std::uint64_t{0}) == 1);
    REQUIRE(sensitivity(h, full) <= 2);
    for (std::uint64_t x1 = 1; x1 < full; ++x1) {
      int conn = connectivity(m, x1);
      int sens = sensitivity(h, x1);
      CAPTURE(desc, x1);
      REQUIRE(conn <= sens);
      int power = 1;
      for (int i = 0; i < conn; ++i) power *= m.q;
      REQUIRE(sens <= 1 + power);
    }
  };
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 3; ++d) for_each_gf2_matroid(n, d, check_bounds);
  Rng rng(8128);
  std::uniform_int_distribution<int> entry(0, 2);
  for (int trial = 0; trial < 250; ++trial) {
    int n = 3 + trial % 3;
    RepresentedMatroid m{3, 3, gf::Mat(n, gf::Vec(3, 0))};
    for (auto& v : m.vectors)
      for (auto& c : v) c = static_cast<std::uint8_t>(entry(rng));
    check_bounds(m);
  }
}
