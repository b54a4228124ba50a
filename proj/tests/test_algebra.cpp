#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "mso/algebra.hpp"
#include "mso/classes.hpp"
#include "mso/logic.hpp"
#include "mso/matroid.hpp"
#include "mso/transduction.hpp"

using namespace mso;

namespace {

RepresentedMatroid rep(int q, int d, gf::Mat vectors) {
  return {q, d, std::move(vectors)};
}

BranchTermPtr singleton(int q, gf::Vec v, std::vector<int> ports) {
  int d = static_cast<int>(v.size());
  return constant_term({rep(q, d, {std::move(v)}), std::move(ports)});
}

// All distinct sorted multisets of n vectors from F_2^3.
std::vector<RepresentedMatroid> gf2_corpus(int n) {
  std::vector<gf::Vec> pool;
  for (int m = 0; m < 8; ++m)
    pool.push_back({static_cast<std::uint8_t>(m & 1),
                    static_cast<std::uint8_t>((m >> 1) & 1),
                    static_cast<std::uint8_t>((m >> 2) & 1)});
  std::set<std::vector<int>> seen;
  std::vector<RepresentedMatroid> out;
  std::vector<int> pick(n, 0);
  while (true) {
    std::vector<int> sorted = pick;
    std::sort(sorted.begin(), sorted.end());
    if (seen.insert(sorted).second) {
      RepresentedMatroid m = rep(2, 3, {});
      for (int i : sorted) m.vectors.push_back(pool[i]);
      out.push_back(m);
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == 7) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  return out;
}

// The compiled term must evaluate to the matroid itself: same rank function
// under the leaf correspondence, no ports left at the root.
void check_term_compiles(const RepresentedMatroid& m, const BranchDecomposition& t) {
  BranchTermPtr term = term_from_branch_decomposition(m, t);
  PortedMatroid value = eval_term(term);
  std::vector<int> order = term_element_order(m, t);
  REQUIRE(value.ports.empty());
  REQUIRE(value.matroid.n() == m.n());
  REQUIRE(value.matroid.q == m.q);
  std::uint64_t full = (std::uint64_t{1} << m.n()) - 1;
  for (std::uint64_t s = 0; s <= full; ++s) {
    std::uint64_t orig = 0;
    for (int i = 0; i < m.n(); ++i)
      if ((s >> i) & 1) orig |= std::uint64_t{1} << order[i];
    if (rank(value.matroid, s) != rank(m, orig)) {
      CAPTURE(s);
      REQUIRE(rank(value.matroid, s) == rank(m, orig));
    }
  }
}

FiniteMonoid cyclic2() { return {{{0, 1}, {1, 0}}, 0}; }

// Two left-absorbing elements with an adjoined unit.
FiniteMonoid left_zero3() { return {{{0, 1, 2}, {1, 1, 1}, {2, 2, 2}}, 0}; }

}  // namespace

TEST_CASE("branch terms serialize and validate") {
  BranchTermPtr inner = union_term(singleton(2, {1, 0}, {0}), singleton(2, {0, 1}, {0}));
  BranchTermPtr term = rename_term({1, 0}, quotient_term({1, 1}, inner));
  TermShape shape = check_term(term);
  CHECK(shape.q == 2);
  CHECK(shape.sort == 2);

  Json j = term_to_json(term);
  CHECK(j["op"] == "rename");
  CHECK(j["child"]["op"] == "quotient");
  CHECK(j["child"]["child"]["op"] == "union");
  CHECK(term_to_json(term_from_json(j)) == j);

  CHECK_THROWS_WITH(check_term(rename_term({2}, inner)),
                    "rename map refers to a missing port");
  CHECK_THROWS_WITH(check_term(quotient_term({1}, inner)),
                    "quotient needs one coefficient per port");
  CHECK_THROWS_WITH(check_term(quotient_term({1, 2}, inner)),
                    "quotient coefficient outside the field");
  CHECK_THROWS_WITH(
      check_term(union_term(singleton(2, {1}, {}), singleton(3, {1}, {}))),
      "union mixes different fields");
  CHECK_THROWS_WITH(check_term(constant_term({rep(2, 1, {{1}}), {1}})),
                    "port out of range");
  Json bad = j;
  bad["op"] = "twist";
  CHECK_THROWS_WITH(term_from_json(bad), "unknown term op: twist");
}

TEST_CASE("term evaluation follows the operations") {
  SECTION("constants evaluate to themselves") {
    PortedMatroid p{rep(3, 2, {{1, 0}, {0, 1}, {1, 2}}), {0, 1, 2}};
    PortedMatroid value = eval_term(constant_term(p));
    CHECK(value.matroid.vectors == p.matroid.vectors);
    CHECK(value.ports == p.ports);
  }

  SECTION("a quotient by the zero combination changes nothing") {
    BranchTermPtr t = constant_term({rep(2, 2, {{1, 0}, {0, 1}}), {0, 1}});
    PortedMatroid value = eval_term(quotient_term({0, 0}, t));
    CHECK(value.matroid.d == 2);
    CHECK(value.matroid.vectors == gf::Mat{{1, 0}, {0, 1}});
  }

  SECTION("identifying two independent elements makes a parallel pair") {
    BranchTermPtr pair =
        union_term(singleton(2, {1}, {0}), singleton(2, {1}, {0}));
    PortedMatroid value = eval_term(quotient_term({1, 1}, pair));
    CHECK(value.matroid.d == 1);
    CHECK(value.matroid.vectors == gf::Mat{{1}, {1}});
    CHECK(value.ports == std::vector<int>{0, 1});
    CHECK(rank(value.matroid, std::uint64_t{3}) == 1);

    // Summing the two copies of the same vector is zero over GF(2).
    PortedMatroid again = eval_term(quotient_term({1, 1}, quotient_term({1, 1}, pair)));
    CHECK(again.matroid.vectors == gf::Mat{{1}, {1}});

    // Quotienting the last dimension away leaves loops in a 1-dim space.
    PortedMatroid flat = eval_term(quotient_term({1, 0}, quotient_term({1, 1}, pair)));
    CHECK(flat.matroid.d == 1);
    CHECK(flat.matroid.vectors == gf::Mat{{0}, {0}});
    CHECK(rank(flat.matroid, std::uint64_t{3}) == 0);
  }

  SECTION("a GF(3) quotient projects along the normalized combination") {
    BranchTermPtr t = constant_term({rep(3, 2, {{1, 0}, {0, 1}, {1, 2}}), {0, 1, 2}});
    PortedMatroid value = eval_term(quotient_term({1, 1, 1}, t));
    CHECK(value.matroid.d == 1);
    CHECK(value.matroid.vectors == gf::Mat{{0}, {1}, {2}});
  }

  SECTION("renames re-index ports and may repeat them") {
    BranchTermPtr t = constant_term({rep(2, 2, {{1, 0}, {0, 1}}), {1, 0}});
    PortedMatroid value = eval_term(rename_term({1, 1, 0}, t));
    CHECK(value.ports == std::vector<int>{0, 0, 1});
    CHECK(value.matroid.vectors == gf::Mat{{1, 0}, {0, 1}});
  }

  SECTION("unions stack representations block-diagonally") {
    PortedMatroid value = eval_term(
        union_term(singleton(2, {1, 1}, {0}), singleton(2, {1}, {0})));
    CHECK(value.matroid.d == 3);
    CHECK(value.matroid.vectors == gf::Mat{{1, 1, 0}, {0, 0, 1}});
    CHECK(value.ports == std::vector<int>{0, 1});
  }
}

TEST_CASE("single elements compile to bare constants") {
  BranchDecomposition t{1, {}};
  BranchTermPtr term = term_from_branch_decomposition(rep(2, 1, {{1}}), t);
  CHECK(term->op == BranchTerm::Op::Constant);
  CHECK(term->constant.ports.empty());
  CHECK(rank(eval_term(term).matroid, std::uint64_t{1}) == 1);

  BranchTermPtr loop = term_from_branch_decomposition(rep(2, 1, {{0}}), t);
  CHECK(loop->op == BranchTerm::Op::Constant);
  CHECK(rank(eval_term(loop).matroid, std::uint64_t{1}) == 0);
}

TEST_CASE("compiled terms match the matroid") {
  RepresentedMatroid triangle = rep(2, 2, {{1, 0}, {0, 1}, {1, 1}});
  BranchDecomposition tree3{3, {{0, 3}, {1, 3}, {2, 3}}};
  check_term_compiles(triangle, tree3);

  // The root renames everything away.
  BranchTermPtr term = term_from_branch_decomposition(triangle, tree3);
  CHECK(term->op == BranchTerm::Op::Rename);
  CHECK(term->map.empty());

  RepresentedMatroid basis = rep(2, 4, {});
  for (int i = 0; i < 4; ++i) {
    gf::Vec v(4, 0);
    v[i] = 1;
    basis.vectors.push_back(v);
  }
  BranchDecomposition tree4{4, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}}};
  check_term_compiles(basis, tree4);

  RepresentedMatroid mixed = rep(3, 2, {{0, 0}, {1, 0}, {1, 0}, {2, 1}});
  check_term_compiles(mixed, tree4);
}

TEST_CASE("compiled terms match across the corpus") {
  for (int n = 1; n <= 4; ++n)
    for (const auto& m : gf2_corpus(n))
      detail::for_each_cubic_tree(n, [&](const std::vector<std::pair<int, int>>& edges) {
        check_term_compiles(m, BranchDecomposition{n, edges});
      });
  std::vector<RepresentedMatroid> fives = gf2_corpus(5);
  for (size_t i = 0; i < fives.size(); i += 7)
    detail::for_each_cubic_tree(5, [&](const std::vector<std::pair<int, int>>& edges) {
      check_term_compiles(fives[i], BranchDecomposition{5, edges});
    });
}

TEST_CASE("port reports track cut connectivity") {
  // A telescoped dependency (the last element sums the three before it) keeps
  // three elements ported across a connectivity-1 cut, so port counts are not
  // bounded by 2^connectivity - 1; the report records what happened instead.
  RepresentedMatroid witness =
      rep(2, 3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}});
  BranchDecomposition tree{5, {{0, 6}, {1, 7}, {2, 5}, {6, 5}, {6, 3}, {7, 5}, {7, 4}}};
  TermPortReport report = term_port_report(witness, tree);
  std::vector<std::pair<int, int>> expected = {
      {0, 0}, {1, 1}, {1, 1}, {0, 0}, {1, 3}, {1, 2}, {1, 1}, {1, 1}, {1, 1}};
  CHECK(report.per_node == expected);
  CHECK(report.max_connectivity == 1);
  CHECK(report.max_ports == 3);

  // Observed across the corpus: disconnected cuts never port anything, and
  // small GF(2) instances stay within three ports.
  for (int n = 2; n <= 4; ++n)
    for (const auto& m : gf2_corpus(n))
      detail::for_each_cubic_tree(n, [&](const std::vector<std::pair<int, int>>& edges) {
        TermPortReport r = term_port_report(m, BranchDecomposition{n, edges});
        REQUIRE(r.per_node.size() == static_cast<size_t>(2 * n - 1));
        int seen_ports = 0;
        int seen_conn = 0;
        for (auto [conn, ports] : r.per_node) {
          if (conn == 0) REQUIRE(ports == 0);
          seen_ports = std::max(seen_ports, ports);
          seen_conn = std::max(seen_conn, conn);
        }
        REQUIRE(seen_ports == r.max_ports);
        REQUIRE(seen_conn == r.max_connectivity);
        REQUIRE(r.max_ports <= 3);
      });
}

TEST_CASE("quotients and renames commute for bijections") {
  PortedMatroid base{rep(3, 2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}}), {0, 1, 2, 3}};
  BranchTermPtr t = constant_term(base);
  std::vector<int> map = {2, 0, 3, 1};
  std::vector<int> after = {1, 2, 0, 2};  // coefficients applied post-rename
  std::vector<int> before(4, 0);
  for (int i = 0; i < 4; ++i) before[map[i]] = after[i];

  PortedMatroid lhs = eval_term(quotient_term(after, rename_term(map, t)));
  PortedMatroid rhs = eval_term(rename_term(map, quotient_term(before, t)));
  CHECK(lhs.matroid.vectors == rhs.matroid.vectors);
  CHECK(lhs.matroid.d == rhs.matroid.d);
  CHECK(lhs.ports == rhs.ports);

  Rng rng(20240817);
  std::uniform_int_distribution<int> field(0, 1);
  for (int trial = 0; trial < 25; ++trial) {
    gf::Mat vectors;
    for (int i = 0; i < 4; ++i)
      vectors.push_back({static_cast<std::uint8_t>(field(rng)),
                         static_cast<std::uint8_t>(field(rng)),
                         static_cast<std::uint8_t>(field(rng))});
    BranchTermPtr c = constant_term({rep(2, 3, vectors), {0, 1, 2, 3}});
    std::vector<int> perm = {0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> coeffs;
    for (int i = 0; i < 4; ++i) coeffs.push_back(field(rng));
    std::vector<int> pre(4, 0);
    for (int i = 0; i < 4; ++i) pre[perm[i]] = coeffs[i];
    PortedMatroid a = eval_term(quotient_term(coeffs, rename_term(perm, c)));
    PortedMatroid b = eval_term(rename_term(perm, quotient_term(pre, c)));
    REQUIRE(a.matroid.vectors == b.matroid.vectors);
    REQUIRE(a.ports == b.ports);
  }
}

TEST_CASE("monoid tables validate and expose idempotents") {
  FiniteMonoid z2 = cyclic2();
  check_monoid(z2);
  CHECK(idempotents(z2) == std::vector<int>{0});

  // Non-unit idempotents exist: both absorbing elements square to themselves.
  FiniteMonoid lz = left_zero3();
  check_monoid(lz);
  CHECK(idempotents(lz) == std::vector<int>{0, 1, 2});

  Json j = monoid_to_json(lz);
  FiniteMonoid back = monoid_from_json(j);
  CHECK(back.table == lz.table);
  CHECK(back.unit == lz.unit);

  CHECK_THROWS_WITH(check_monoid({{{0, 1}}, 0}),
                    "multiplication table must be square");
  CHECK_THROWS_WITH(check_monoid({{{0, 1}, {0, 0}}, 0}), "unit laws fail");
  CHECK_THROWS_WITH(
      check_monoid({{{0, 1, 2}, {1, 2, 1}, {2, 1, 1}}, 0}),
      "multiplication is not associative");
  CHECK_THROWS_WITH(check_monoid({{}, 0}), "monoid needs at least one element");
}

TEST_CASE("homomorphisms map letters") {
  Homomorphism h{cyclic2(), {{'a', 1}, {'b', 0}}};
  check_homomorphism(h);
  CHECK(word_image(h, "abba") == 0);
  CHECK(word_image(h, "aba") == 0);
  CHECK(word_image(h, "ab") == 1);
  CHECK(word_image(h, "") == 0);
  CHECK_THROWS_WITH(word_image(h, "ax"), "unmapped letter: x");

  Json j = homomorphism_to_json(h);
  Homomorphism back = homomorphism_from_json(j);
  CHECK(back.letters == h.letters);
  CHECK(back.monoid.table == h.monoid.table);

  Json bad = j;
  bad["letters"]["cd"] = 1;
  CHECK_THROWS_WITH(homomorphism_from_json(bad), "letters must be single characters");
}

TEST_CASE("factorization trees validate") {
  FiniteMonoid z2 = cyclic2();
  check_factorization(z2, {1, {}});
  check_factorization(z2, {0, {{1, {}}, {1, {}}}});

  FiniteMonoid lz = left_zero3();
  FactorizationTree wide{1, {{1, {}}, {1, {}}, {1, {}}}};
  check_factorization(lz, wide);
  CHECK(tree_height(wide) == 1);
  CHECK(tree_yield(wide) == std::vector<int>{1, 1, 1});

  Json j = factorization_to_json(wide);
  FactorizationTree back = factorization_from_json(j);
  CHECK(factorization_to_json(back) == j);

  CHECK_THROWS_WITH(check_factorization(z2, {1, {{1, {}}, {1, {}}}}),
                    "node label must be the product of its children");
  CHECK_THROWS_WITH(check_factorization(z2, {1, {{1, {}}}}),
                    "internal nodes need at least two children");
  CHECK_THROWS_WITH(check_factorization(lz, {1, {{1, {}}, {2, {}}, {1, {}}}}),
                    "wide nodes need equal child labels");
  CHECK_THROWS_WITH(check_factorization(z2, {1, {{1, {}}, {1, {}}, {1, {}}}}),
                    "wide nodes need an idempotent label");
  CHECK_THROWS_WITH(check_factorization(z2, {2, {}}), "tree element out of range");
}

TEST_CASE("factorization trees stay shallow") {
  Homomorphism single{cyclic2(), {{'a', 1}}};
  FactorizationTree leaf = factorization_tree(single, "a");
  CHECK(leaf.children.empty());
  CHECK(tree_height(leaf) == 0);
  CHECK(leaf.element == 1);

  // An idempotent power collapses into one wide node.
  Homomorphism idem{left_zero3(), {{'e', 1}}};
  FactorizationTree flat = factorization_tree(idem, "eeeee");
  CHECK(tree_height(flat) == 1);
  CHECK(flat.element == 1);
  CHECK(flat.children.size() == 5);
  CHECK(tree_yield(flat) == std::vector<int>(5, 1));
  check_factorization(idem.monoid, flat);

  CHECK_THROWS_WITH(factorization_tree(single, ""), "cannot factorize the empty word");

  auto exercise = [](const Homomorphism& h, const std::string& w) {
    FactorizationTree t = factorization_tree(h, w);
    check_factorization(h.monoid, t);
    REQUIRE(t.element == word_image(h, w));
    std::vector<int> letters;
    for (char c : w) letters.push_back(letter_image(h, c));
    REQUIRE(tree_yield(t) == letters);
    REQUIRE(tree_height(t) <= 3 * h.monoid.size());
  };

  // Adversarial small-monoid words of length 200.
  Homomorphism z2h{cyclic2(), {{'a', 1}, {'b', 0}}};
  std::string abbb, alt, runs;
  for (int i = 0; i < 50; ++i) abbb += "abbb";
  for (int i = 0; i < 100; ++i) alt += "ab";
  for (int i = 0; i < 25; ++i) runs += "aabbbaba";
  exercise(z2h, abbb);
  exercise(z2h, alt);
  exercise(z2h, runs);
  exercise(z2h, std::string(200, 'a'));
  Homomorphism trivial{{{{0}}, 0}, {{'u', 0}}};
  exercise(trivial, std::string(200, 'u'));

  Rng rng(911);
  std::uniform_int_distribution<int> length(1, 200);
  for (int trial = 0; trial < 60; ++trial) {
    FiniteMonoid m = random_transformation_monoid(rng);
    Homomorphism h{m, {}};
    std::uniform_int_distribution<int> element(0, m.size() - 1);
    for (char c = 'a'; c < 'a' + std::min(m.size(), 4); ++c)
      h.letters[c] = element(rng);
    std::string w;
    int chars = length(rng);
    std::uniform_int_distribution<int> letter(0, static_cast<int>(h.letters.size()) - 1);
    for (int i = 0; i < chars; ++i)
      w += static_cast<char>('a' + letter(rng));
    exercise(h, w);
  }
}

TEST_CASE("random transformation monoids close") {
  Rng rng(4242);
  bool nontrivial = false;
  for (int trial = 0; trial < 30; ++trial) {
    FiniteMonoid m = random_transformation_monoid(rng);
    check_monoid(m);
    REQUIRE(m.size() <= 6);
    REQUIRE(m.unit == 0);
    if (m.size() > 1) nontrivial = true;
    for (int e : idempotents(m)) REQUIRE(m.mul(e, e) == e);
  }
  CHECK(nontrivial);
}

TEST_CASE("languages transport through transductions") {
  ClassId strings = class_id(ClassTag::Strings, 1);
  Transduction id = identity_transduction(strings);
  FormulaPtr two = parse_formula("(exists x (exists y (lt x y)))");

  ProbeReport report = recognizability_probe(id, two, 4);
  CHECK(report.structures == 4);
  CHECK(report.table == std::vector<bool>{false, true, true, true});
  CHECK(report.disagreements == 0);
  CHECK(report.first_disagreement == -1);

  SECTION("predicates tabulate without a sentence") {
    ProbeReport sizes = recognizability_probe(
        id, StructurePredicate{[](const Structure& a) { return a.n % 2 == 0; }}, 4);
    CHECK(sizes.table == std::vector<bool>{false, true, false, true});
    CHECK(sizes.disagreements == 0);
  }

  SECTION("filters drop structures from the language") {
    Transduction filtered = id;
    filtered.steps.push_back(Filter{two});
    ProbeReport gate = recognizability_probe(
        filtered, StructurePredicate{[](const Structure&) { return true; }}, 4);
    CHECK(gate.table == std::vector<bool>{false, true, true, true});

    ProbeReport checked = recognizability_probe(filtered, two, 3);
    CHECK(checked.disagreements == 0);
  }

  SECTION("nondeterministic colourings agree with direct evaluation") {
    Transduction coloured = id;
    coloured.steps.push_back(Colour{2});
    coloured.output.reset();
    FormulaPtr lit = parse_formula("(exists x (_col_1 x))");
    ProbeReport paint = recognizability_probe(coloured, lit, 3);
    CHECK(paint.table == std::vector<bool>{true, true, true});
    CHECK(paint.disagreements == 0);
  }

  SECTION("bounds are enforced") {
    CHECK_THROWS_WITH(recognizability_probe(id, two, 9),
                      "probe corpus bound must be 1..8");
    Transduction anonymous = id;
    anonymous.input.reset();
    CHECK_THROWS_WITH(recognizability_probe(anonymous, two, 2),
                      "probe needs a transduction with a named input class");
  }
}
