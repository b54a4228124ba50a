#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "mso/enumerate.hpp"
#include "mso/logic.hpp"

using namespace mso;

namespace {

bool sat(const Structure& a, const std::string& text) {
  return holds(a, *parse_formula(text));
}

}  // namespace

TEST_CASE("formulas print back to their source form") {
  for (const char* text : {
           "(exists-set X (divisible 2 X))",
           "(forall x (exists y (and (edge x y) (not (= x y)))))",
           "(implies (in x X) (or true false (lt x y)))",
           "true",
           "(forall-set Y (exists x (in x Y)))",
       }) {
    CHECK(formula_to_string(*parse_formula(text)) == text);
  }
}

TEST_CASE("malformed formulas are rejected") {
  CHECK_THROWS_AS(parse_formula("(and true"), error);
  CHECK_THROWS_AS(parse_formula("(and true) extra"), error);
  CHECK_THROWS_AS(parse_formula("(divisible 1 X)"), error);
  CHECK_THROWS_AS(parse_formula("(divisible x X)"), error);
  CHECK_THROWS_AS(parse_formula("(exists X true)"), error);
  CHECK_THROWS_AS(parse_formula("(exists-set x true)"), error);
  CHECK_THROWS_AS(parse_formula("(implies true)"), error);
  CHECK_THROWS_AS(parse_formula(""), error);
}

TEST_CASE("static checks catch scope and kind errors") {
  Vocabulary voc = vocabulary_of(class_id(ClassTag::GraphsEdge));
  auto bad = [&](const std::string& text) {
    CHECK_THROWS_AS(check_formula(*parse_formula(text), voc), error);
  };
  bad("(exists x (edge x y))");                       // y unbound
  bad("(exists x (exists x true))");                  // rebinding
  bad("(exists-set X (exists-set X true))");          // rebinding
  bad("(exists x (edge x))");                         // arity
  bad("(exists x (exists y (lt x y)))");              // unknown relation
  bad("(exists-set X (exists y (edge X y)))");        // set var in element slot
  bad("(exists x (in x x))");                         // element var in set slot
  bad("(exists x (divisible 2 x))");
  check_formula(*parse_formula("(forall x (not (edge x x)))"), voc);
  // Free variables are fine when declared.
  check_formula(*parse_formula("(edge x y)"), voc,
                {{"x", Kind::Element}, {"y", Kind::Element}});
}

TEST_CASE("set quantifier depth counts nesting, not occurrences") {
  CHECK(set_quantifier_depth(*parse_formula("(exists x true)")) == 0);
  CHECK(set_quantifier_depth(*parse_formula(
            "(and (exists-set X true) (exists-set Y true))")) == 1);
  CHECK(set_quantifier_depth(*parse_formula(
            "(exists-set X (forall x (forall-set Y (in x Y))))")) == 2);
}

TEST_CASE("divisibility counts the empty set as divisible") {
  Structure a = string_structure(2, {0});
  CHECK(sat(a, "(exists-set X (divisible 2 X))"));
  CHECK(sat(a, "(exists-set X (divisible 3 X))"));
}

TEST_CASE("a nonempty even subset exists exactly when n is at least 2") {
  const std::string f =
      "(exists-set X (and (divisible 2 X) (exists x (in x X))))";
  for (int n = 1; n <= 4; ++n) {
    Structure a = string_structure(2, std::vector<int>(n, 0));
    CHECK(sat(a, f) == (n >= 2));
  }
}

TEST_CASE("even universe size is expressible with a divisibility test") {
  const std::string f =
      "(forall-set X (implies (forall x (in x X)) (divisible 2 X)))";
  for (int n = 1; n <= 5; ++n) {
    Structure a = string_structure(2, std::vector<int>(n, 0));
    CHECK(sat(a, f) == (n % 2 == 0));
  }
}

TEST_CASE("an even number of letter-1 positions is definable") {
  // X must be exactly the letter-1 positions; then test divisibility.
  const std::string f =
      "(exists-set X (and (forall x (implies (in x X) (letter1 x)))"
      " (forall x (implies (letter1 x) (in x X))) (divisible 2 X)))";
  auto count1 = [](const std::vector<int>& w) {
    int c = 0;
    for (int x : w) c += x == 1;
    return c;
  };
  for (const auto& w : std::vector<std::vector<int>>{
           {0}, {1}, {1, 1}, {0, 1, 0}, {1, 0, 1}, {1, 1, 1}, {0, 0}}) {
    Structure a = string_structure(2, w);
    CHECK(sat(a, f) == (count1(w) % 2 == 0));
  }
}

TEST_CASE("bipartiteness of small graphs") {
  const std::string f =
      "(exists-set X (forall x (forall y (implies (edge x y)"
      " (or (and (in x X) (not (in y X))) (and (in y X) (not (in x X))))))))";
  Structure path = graph_structure(4, {{0, 1}, {1, 2}, {2, 3}});
  Structure triangle = graph_structure(3, {{0, 1}, {1, 2}, {0, 2}});
  Structure square = graph_structure(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  Structure odd5 = graph_structure(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
  CHECK(sat(path, f));
  CHECK(sat(square, f));
  CHECK_FALSE(sat(triangle, f));
  CHECK_FALSE(sat(odd5, f));
}

TEST_CASE("connectivity of small graphs") {
  // Every proper nonempty vertex set has an edge leaving it.
  const std::string f =
      "(forall-set X (implies (and (exists x (in x X))"
      " (exists x (not (in x X))))"
      " (exists x (exists y (and (edge x y) (in x X) (not (in y X)))))))";
  CHECK(sat(graph_structure(4, {{0, 1}, {1, 2}, {2, 3}}), f));
  CHECK_FALSE(sat(graph_structure(4, {{0, 1}, {2, 3}}), f));
  CHECK(sat(graph_structure(1, {}), f));
}

TEST_CASE("free variables are read from the valuation") {
  Structure a = graph_structure(3, {{0, 1}});
  FormulaPtr f = parse_formula("(edge x y)");
  Valuation v;
  v.elems = {{"x", 0}, {"y", 1}};
  CHECK(evaluate(a, *f, v));
  v.elems = {{"x", 0}, {"y", 2}};
  CHECK_FALSE(evaluate(a, *f, v));
  v.elems = {{"x", 0}};
  CHECK_THROWS_AS(evaluate(a, *f, v), error);
  v.elems = {{"x", 0}, {"y", 7}};
  CHECK_THROWS_AS(evaluate(a, *f, v), error);

  FormulaPtr g = parse_formula("(divisible 2 X)");
  Valuation vs;
  vs.sets = {{"X", 0b101}};
  CHECK(evaluate(a, *g, vs));
  vs.sets = {{"X", 0b111}};
  CHECK_FALSE(evaluate(a, *g, vs));
}

TEST_CASE("set relations can be queried directly") {
  // A structure with one set relation holding exactly {0,2}.
  Vocabulary voc;
  voc.symbols.push_back({"mark", {Kind::Set}});
  Structure a = make_structure(voc, 3);
  a.rels[0].push_back(Tuple{SetSlot{0, 2}});
  FormulaPtr f = parse_formula("(exists-set X (and (mark X) (divisible 2 X)))");
  CHECK(holds(a, *f));
  FormulaPtr g = parse_formula(
      "(exists-set X (and (mark X) (exists x (and (in x X) (letterlike x)))))");
  CHECK_THROWS_AS(holds(a, *g), error);  // unknown relation
  FormulaPtr h = parse_formula("(forall-set X (implies (mark X) (in x X)))");
  Valuation v;
  v.elems = {{"x", 1}};
  CHECK_FALSE(evaluate(a, *h, v));
  v.elems = {{"x", 2}};
  CHECK(evaluate(a, *h, v));
}

TEST_CASE("evaluation rejects runs beyond the budget") {
  Structure big = graph_structure(13, {});
  FormulaPtr two = parse_formula(
      "(exists-set X (exists-set Y (exists x (and (in x X) (in x Y)))))");
  // depth 2 on 13 elements asks for 26 > 24.
  CHECK_THROWS_AS(holds(big, *two), error);
  Budget loose;
  loose.logic = 26;
  CHECK(holds(big, *two, loose));
  // First-order-only formulas are not limited by the set budget.
  CHECK(holds(graph_structure(30, {{3, 17}}),
              *parse_formula("(exists x (exists y (edge x y)))")));
}

TEST_CASE("the budget environment override is honoured") {
  Structure big = graph_structure(13, {});
  FormulaPtr closed = parse_formula(
      "(exists-set X (exists-set Y (exists x (and (in x X) (in x Y)))))");
  CHECK_THROWS_AS(holds(big, *closed), error);
  setenv("MSO_BUDGET", "30", 1);
  CHECK(holds(big, *closed));
  setenv("MSO_BUDGET", "10", 1);
  CHECK_THROWS_AS(
      holds(string_structure(2, std::vector<int>(11, 0)),
            *parse_formula("(exists-set X true)")),
      error);
  unsetenv("MSO_BUDGET");
}
