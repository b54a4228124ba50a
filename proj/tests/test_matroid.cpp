#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "mso/enumerate.hpp"
#include "mso/matroid.hpp"

using namespace mso;

namespace {

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

// Every GF(2) represented matroid with the given shape.
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

// All independence families on a labelled ground set, grown from the
// canonical enumeration by relabelling.
std::vector<GeneralMatroid> all_labelled_matroids(int n) {
  std::set<std::vector<std::uint64_t>> families;
  std::vector<int> perm(n);
  for (const auto& s : enumerate_exact(class_id(ClassTag::MatroidIndependence), n)) {
    GeneralMatroid g = general_from_structure(s);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
      std::vector<std::uint64_t> fam;
      for (auto mask : g.indep) {
        std::uint64_t out = 0;
        for (int i = 0; i < n; ++i)
          if ((mask >> i) & 1) out |= std::uint64_t{1} << perm[i];
        fam.push_back(out);
      }
      sort_unique(fam);
      families.insert(fam);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::vector<GeneralMatroid> out;
  for (const auto& fam : families) out.push_back(make_general(n, fam));
  return out;
}

std::vector<OrderedPartition> all_ordered_partitions(const std::vector<int>& labels) {
  int n = static_cast<int>(labels.size());
  std::vector<OrderedPartition> out;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> assign(n, 0);
    while (true) {
      OrderedPartition p;
      p.blocks.assign(k, {});
      for (int i = 0; i < n; ++i) p.blocks[assign[i]].push_back(labels[i]);
      if (std::none_of(p.blocks.begin(), p.blocks.end(),
                       [](const std::vector<int>& b) { return b.empty(); }))
        out.push_back(p);
      int i = n - 1;
      while (i >= 0 && assign[i] == k - 1) assign[i--] = 0;
      if (i < 0) break;
      ++assign[i];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("rank follows elimination") {
  RepresentedMatroid t = triangle();
  CHECK(rank(t, std::vector<int>{}) == 0);
  CHECK(rank(t, std::vector<int>{0}) == 1);
  CHECK(rank(t, std::vector<int>{1}) == 1);
  CHECK(rank(t, {0, 1}) == 2);
  CHECK(rank(t, {0, 1, 2}) == 2);
  // monotone under inclusion
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b)
      if ((a & ~b) == 0) CHECK(rank(t, a) <= rank(t, b));
}

TEST_CASE("matroid JSON round trips") {
  RepresentedMatroid t = triangle();
  Json j = represented_to_json(t);
  RepresentedMatroid t2 = represented_from_json(j);
  CHECK(represented_to_json(t2) == j);
  GeneralMatroid g = to_general(t);
  CHECK(general_from_json(general_to_json(g)) == g);
  GeneralMatroid minor = contract_elements(g, {0});
  CHECK(general_from_json(general_to_json(minor)) == minor);
  CHECK_THROWS_AS(represented_from_json(Json{{"field", 4}, {"dim", 1}, {"vectors", {{1}}}}),
                  error);
  CHECK_THROWS_AS(general_from_json(Json{{"ground", 1}, {"independent", {{0, 0}}}}),
                  error);
  // families violating the axioms are rejected on load
  Json bad;
  bad["ground"] = 2;
  bad["independent"] = Json::array({Json::array({0, 1})});
  CHECK_THROWS_AS(general_from_json(bad), error);
}

TEST_CASE("independence and null structures") {
  RepresentedMatroid one{2, 2, {{1, 0}}};
  GeneralMatroid g = to_general(one);
  CHECK(g.indep == std::vector<std::uint64_t>{0, 1});
  Structure is = independence_structure(g);
  check_member(class_id(ClassTag::MatroidIndependence), is, "indep");
  CHECK(general_from_structure(is) == g);
  Structure ns = null_structure(one);
  check_member(class_id(ClassTag::MatroidNull, 2), ns, "null");
  CHECK(ns.tuples("null").size() == 1);  // only the zero combination

  Structure tn = null_structure(triangle());
  check_member(class_id(ClassTag::MatroidNull, 2), tn, "null");
  REQUIRE(tn.tuples("null").size() == 2);
  CHECK(tn.tuples("null")[1] == Tuple{SetSlot{0, 1, 2}});
}

TEST_CASE("over GF(2) the nulls determine independence") {
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 3; ++d)
      for_each_gf2_matroid(n, d, [&](const RepresentedMatroid& m) {
        std::vector<std::uint64_t> nulls;
        Structure ns = null_structure(m);
        for (const auto& t : ns.tuples("null")) {
          std::uint64_t mask = set_to_mask(std::get<SetSlot>(t[0]));
          if (mask) nulls.push_back(mask);
        }
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
          bool has_null = false;
          for (auto s : nulls) has_null |= (s & ~x) == 0;
          bool indep = rank(m, x) == popcount(x);
          REQUIRE(indep == !has_null);
        }
      });
}

TEST_CASE("represented matroids satisfy the independence axioms") {
  // every distinct family arising from small GF(2)/GF(3) representations
  std::set<std::pair<int, std::vector<std::uint64_t>>> families;
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 3; ++d) {
      for_each_gf2_matroid(n, d, [&](const RepresentedMatroid& m) {
        families.insert({n, to_general(m).indep});
      });
      int bits = n * d;
      long long total = 1;
      for (int i = 0; i < bits; ++i) total *= 3;
      for (long long code = 0; code < total; ++code) {
        RepresentedMatroid m{3, d, gf::Mat(n, gf::Vec(d, 0))};
        long long c = code;
        for (int i = 0; i < bits; ++i) {
          m.vectors[i / d][i % d] = static_cast<std::uint8_t>(c % 3);
          c /= 3;
        }
        families.insert({n, to_general(m).indep});
      }
    }
  CHECK(families.size() > 50);
  for (const auto& [n, fam] : families)
    CHECK_NOTHROW(check_general(make_general(n, fam)));
}

TEST_CASE("circuits are the minimal dependent sets") {
  CHECK(circuits(basis_vectors(2)).empty());
  CHECK(circuits(triangle()) == std::vector<std::vector<int>>{{0, 1, 2}});
  RepresentedMatroid parallel{2, 2, {{1, 0}, {1, 0}}};
  CHECK(circuits(parallel) == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("connected components match on both characterizations") {
  CHECK(connected_components(basis_vectors(2)) ==
        std::vector<std::vector<int>>{{0}, {1}});
  CHECK(connected_components(triangle()) ==
        std::vector<std::vector<int>>{{0, 1, 2}});
  RepresentedMatroid two{2, 6, {}};
  auto tri = triangle();
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < 3; ++i) {
      gf::Vec v(6, 0);
      for (int c = 0; c < 3; ++c) v[3 * block + c] = tri.vectors[i][c];
      two.vectors.push_back(v);
    }
  CHECK(connected_components(two) ==
        std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5}});
  // the internal separation cross-check runs on every call above
  for (const auto& g : all_labelled_matroids(4)) CHECK_NOTHROW(connected_components(g));
}

TEST_CASE("duality is an involution that swaps bases with complements") {
  for (int n = 1; n <= 4; ++n)
    for (int d = 1; d <= 3; ++d)
      for_each_gf2_matroid(n, d, [&](const RepresentedMatroid& m) {
        GeneralMatroid g = to_general(m);
        CHECK(dual(dual(g)) == g);
      });
  GeneralMatroid free2 = to_general(basis_vectors(2));
  CHECK(dual(free2).indep == std::vector<std::uint64_t>{0});
  RepresentedMatroid u12{2, 1, {{1}, {1}}};
  CHECK(dual(to_general(u12)) == to_general(u12));
}

TEST_CASE("minors keep element names") {
  GeneralMatroid g = to_general(triangle());
  CHECK(delete_elements(g, {}) == g);
  GeneralMatroid c = contract_elements(g, {0});
  CHECK(c.labels == std::vector<int>{1, 2});
  CHECK(circuits(c) == std::vector<std::vector<int>>{{1, 2}});
  CHECK_THROWS_AS(delete_elements(g, {0, 1, 2}), error);
  CHECK_THROWS_AS(contract_elements(g, {0, 1, 2}), error);
  RepresentedMatroid rd = delete_elements(triangle(), std::vector<int>{1});
  CHECK(rd.vectors == gf::Mat{{1, 1, 0}, {1, 0, 1}});
}

TEST_CASE("deletion and contraction of distinct elements commute") {
  for (const auto& g : all_labelled_matroids(4)) {
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) {
        if (x == y) continue;
        GeneralMatroid a = contract_elements(delete_elements(g, {x}), {y});
        GeneralMatroid b = delete_elements(contract_elements(g, {y}), {x});
        REQUIRE(a == b);
      }
    // contraction through the dual, stated explicitly
    GeneralMatroid via = dual(delete_elements(dual(g), {0}));
    CHECK(via == contract_elements(g, {0}));
  }
}

TEST_CASE("connectivity equals the interface dimension") {
  CHECK(connectivity(basis_vectors(2), std::vector<int>{0}) == 0);
  CHECK(connectivity(triangle(), std::vector<int>{0}) == 1);
  CHECK_THROWS_AS(connectivity(triangle(), std::vector<int>{}), error);
  CHECK_THROWS_AS(connectivity(triangle(), {0, 1, 2}), error);
  Rng rng(20240817);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng() % 5);
    int d = 1 + static_cast<int>(rng() % 3);
    int q = (rng() % 2) ? 2 : 3;
    RepresentedMatroid m{q, d, {}};
    for (int i = 0; i < n; ++i) {
      gf::Vec v(d);
      for (auto& x : v) x = static_cast<std::uint8_t>(rng() % q);
      m.vectors.push_back(v);
    }
    std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::uint64_t x1 = 1 + rng() % (full - 1);
    CHECK(connectivity(m, x1) == connectivity(m, full & ~x1));
  }
}

TEST_CASE("cubic tree enumeration hits the double-factorial counts") {
  for (auto [n, expected] : std::vector<std::pair<int, int>>{
           {1, 1}, {2, 1}, {3, 1}, {4, 3}, {5, 15}, {6, 105}}) {
    int count = 0;
    detail::for_each_cubic_tree(n, [&](const auto&) { ++count; });
    CHECK(count == expected);
  }
}

TEST_CASE("branch decompositions validate and serialize") {
  BranchwidthResult r = branchwidth(triangle());
  CHECK(r.width == 1);
  CHECK_NOTHROW(check_decomposition(r.decomposition));
  CHECK(decomposition_width(triangle(), r.decomposition) == 1);
  BranchDecomposition round =
      decomposition_from_json(decomposition_to_json(r.decomposition));
  CHECK(round.edges == r.decomposition.edges);
  BranchDecomposition bad{3, {{0, 1}, {1, 2}, {2, 0}}};
  CHECK_THROWS_AS(check_decomposition(bad), error);
}

TEST_CASE("branchwidth of reference matroids") {
  CHECK(branchwidth(basis_vectors(3)).width == 0);
  CHECK(branchwidth(triangle()).width == 1);
  RepresentedMatroid u24{3, 2, {{1, 0}, {0, 1}, {1, 1}, {1, 2}}};
  CHECK(branchwidth(u24).width == 2);
  // disjoint union keeps the worst part's width
  RepresentedMatroid two{2, 6, {}};
  auto tri = triangle();
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < 3; ++i) {
      gf::Vec v(6, 0);
      for (int c = 0; c < 3; ++c) v[3 * block + c] = tri.vectors[i][c];
      two.vectors.push_back(v);
    }
  CHECK(branchwidth(two).width == 1);
  RepresentedMatroid big{2, 1, gf::Mat(10, {1})};
  CHECK_THROWS_AS(branchwidth(big), error);
}

TEST_CASE("branchwidth is invariant under element permutation and deterministic") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    RepresentedMatroid m{2, 3, {}};
    for (int i = 0; i < 5; ++i) {
      gf::Vec v(3);
      for (auto& x : v) x = static_cast<std::uint8_t>(rng() % 2);
      m.vectors.push_back(v);
    }
    BranchwidthResult a = branchwidth(m);
    BranchwidthResult b = branchwidth(m);
    CHECK(a.width == b.width);
    CHECK(a.decomposition.edges == b.decomposition.edges);
    RepresentedMatroid p = m;
    std::shuffle(p.vectors.begin(), p.vectors.end(), rng);
    CHECK(branchwidth(p).width == a.width);
  }
}

TEST_CASE("multi-matroid components join the member partitions") {
  GeneralMatroid a = to_general(RepresentedMatroid{2, 2, {{1, 0}, {1, 0}, {0, 1}}});
  GeneralMatroid b = to_general(RepresentedMatroid{2, 2, {{1, 0}, {0, 1}, {0, 1}}});
  CHECK(connected_components(a) == std::vector<std::vector<int>>{{0, 1}, {2}});
  CHECK(connected_components(b) == std::vector<std::vector<int>>{{0}, {1, 2}});
  CHECK(multi_connected_components({{a, b}}) ==
        std::vector<std::vector<int>>{{0, 1, 2}});
  CHECK(multi_connected_components({{a}}) == connected_components(a));
  GeneralMatroid free3 = to_general(basis_vectors(3));
  CHECK(multi_connected_components({{free3, free3}}) ==
        std::vector<std::vector<int>>{{0}, {1}, {2}});
  CHECK_THROWS_AS(check_multi({{a, to_general(basis_vectors(2))}}), error);
  MultiMatroid loaded = multi_from_json(
      Json{{"members", Json::array({general_to_json(a), general_to_json(b)})}});
  CHECK(loaded.members.size() == 2);
}

TEST_CASE("homogeneity of the triangle under the singleton order") {
  OrderedPartition p{{{0}, {1}, {2}}};
  HomogeneityReport r = is_homogeneous(to_general(triangle()), p);
  CHECK(r.homogeneous);
  CHECK(r.violation.empty());
}

TEST_CASE("homogeneity violations carry witnesses") {
  // parallel pair {0,2} with a free element 1 in between: the circuit's
  // indices skip the middle block
  GeneralMatroid g = to_general(RepresentedMatroid{2, 2, {{1, 0}, {0, 1}, {1, 0}}});
  HomogeneityReport r = is_homogeneous(g, OrderedPartition{{{0}, {1}, {2}}});
  CHECK_FALSE(r.homogeneous);
  CHECK(r.violation.find("interval") != std::string::npos);

  GeneralMatroid free2 = to_general(basis_vectors(2));
  HomogeneityReport s = is_homogeneous(free2, OrderedPartition{{{0}, {1}}});
  CHECK_FALSE(s.homogeneous);
  CHECK(s.violation.find("connecting circuit") != std::string::npos);
}

TEST_CASE("a single block is homogeneous exactly for connected matroids") {
  for (int n = 2; n <= 4; ++n)
    for (const auto& g : all_labelled_matroids(n)) {
      OrderedPartition p{{g.labels}};
      bool connected = connected_components(g).size() == 1;
      REQUIRE(is_homogeneous(g, p).homogeneous == connected);
    }
}

TEST_CASE("disconnected matroids admit no homogeneous order") {
  GeneralMatroid coloops = to_general(basis_vectors(3));
  for (const auto& p : all_ordered_partitions(coloops.labels))
    CHECK_FALSE(is_homogeneous(coloops, p).homogeneous);
}

namespace {

// The colour of an element is its block index mod 5.  For homogeneous
// orders, an index difference of d in {0,1} must coincide with: colours
// differing by d mod 5 AND a common circuit missing at least one colour.
void check_mod5_claim(const MultiMatroid& mm, const OrderedPartition& p) {
  std::map<int, int> index;
  for (size_t b = 0; b < p.blocks.size(); ++b)
    for (int x : p.blocks[b]) index[x] = static_cast<int>(b);
  std::vector<std::vector<std::vector<int>>> css;
  for (const auto& g : mm.members) css.push_back(circuits(g));
  const auto& labels = mm.members[0].labels;
  for (int delta = 0; delta <= 1; ++delta)
    for (int x : labels)
      for (int y : labels) {
        if (x >= y) continue;
        int diff = index.at(y) - index.at(x);
        bool lhs = std::abs(diff) == delta;
        bool colours = ((diff % 5) + 5) % 5 == delta || ((-diff % 5) + 5) % 5 == delta;
        bool avoid = false;
        for (const auto& cs : css)
          for (const auto& c : cs) {
            if (!std::binary_search(c.begin(), c.end(), x) ||
                !std::binary_search(c.begin(), c.end(), y))
              continue;
            std::set<int> cols;
            for (int z : c) cols.insert(index.at(z) % 5);
            if (cols.size() < 5) avoid = true;
          }
        REQUIRE(lhs == (colours && avoid));
      }
}

}  // namespace

TEST_CASE("the mod-5 colouring separates index differences 0 and 1") {
  // exhaustive: all degree-2 multi-matroids on 3 elements, all orders
  auto m3 = all_labelled_matroids(3);
  auto p3 = all_ordered_partitions({0, 1, 2});
  int homogeneous_seen = 0;
  for (const auto& a : m3)
    for (const auto& b : m3)
      for (const auto& p : p3) {
        MultiMatroid mm{{a, b}};
        if (!is_homogeneous(mm, p).homogeneous) continue;
        ++homogeneous_seen;
        check_mod5_claim(mm, p);
      }
  CHECK(homogeneous_seen > 0);

  // exhaustive: single matroids on 4 elements, all orders
  for (const auto& g : all_labelled_matroids(4))
    for (const auto& p : all_ordered_partitions({0, 1, 2, 3})) {
      MultiMatroid mm{{g}};
      if (!is_homogeneous(mm, p).homogeneous) continue;
      check_mod5_claim(mm, p);
    }

  // sampled: degree-2 pairs on 4 elements
  auto m4 = all_labelled_matroids(4);
  auto p4 = all_ordered_partitions({0, 1, 2, 3});
  Rng rng(20240818);
  for (int trial = 0; trial < 4000; ++trial) {
    MultiMatroid mm{{m4[rng() % m4.size()], m4[rng() % m4.size()]}};
    const auto& p = p4[rng() % p4.size()];
    if (!is_homogeneous(mm, p).homogeneous) continue;
    check_mod5_claim(mm, p);
  }

  // structured instances on 5 and 6 elements: uniform matroids are
  // connected with short circuits everywhere
  for (int n = 5; n <= 6; ++n) {
    for (int r = 1; r < n; ++r) {
      std::vector<std::uint64_t> indep;
      for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
        if (popcount(s) <= r) indep.push_back(s);
      GeneralMatroid u = make_general(n, indep);
      std::vector<int> labels(n);
      for (int i = 0; i < n; ++i) labels[i] = i;
      for (const auto& p : std::vector<OrderedPartition>{
               {{labels}},
               {{{0, 1, 2}, std::vector<int>(labels.begin() + 3, labels.end())}}}) {
        MultiMatroid mm{{u, u}};
        if (!is_homogeneous(mm, p).homogeneous) continue;
        check_mod5_claim(mm, p);
      }
    }
  }
}
