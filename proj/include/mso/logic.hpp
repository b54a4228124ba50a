#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mso/structures.hpp"

namespace mso {

// Monadic second-order formulas with set-cardinality divisibility tests.
// Concrete syntax is s-expressions:
//
//   (edge x y)            relation atom over the structure's vocabulary
//   (= x y)  (in x X)     element equality and set membership
//   (divisible p X)       |X| is divisible by p  (p >= 2)
//   (not f) (and f ...) (or f ...) (implies f g)
//   (exists x f) (forall x f) (exists-set X f) (forall-set X f)
//   true  false
//
// Element variables start with a lowercase letter, set variables with an
// uppercase letter.  A quantifier may not rebind a variable already in
// scope.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Op {
    Rel,
    Eq,
    In,
    Div,
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
    ExistsSet,
    ForallSet,
    True,
    False,
  };
  Op op = Op::True;
  std::string name;               // relation name or bound variable
  int param = 0;                  // divisor for Div
  std::vector<std::string> args;  // variable arguments of atoms
  std::vector<FormulaPtr> kids;
};

inline bool is_set_var(const std::string& v) {
  return !v.empty() && 'A' <= v[0] && v[0] <= 'Z';
}
inline bool is_element_var(const std::string& v) {
  return !v.empty() && 'a' <= v[0] && v[0] <= 'z';
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct SexprToken {
  std::vector<std::string> toks;
  size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const {
    require(!done(), "formula ends unexpectedly");
    return toks[pos];
  }
  std::string next() {
    require(!done(), "formula ends unexpectedly");
    return toks[pos++];
  }
};

inline SexprToken tokenize(const std::string& text) {
  SexprToken t;
  std::string cur;
  for (char ch : text) {
    if (ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) {
        t.toks.push_back(cur);
        cur.clear();
      }
      if (ch == '(') t.toks.push_back("(");
      if (ch == ')') t.toks.push_back(")");
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) t.toks.push_back(cur);
  return t;
}

inline FormulaPtr parse_sexpr(SexprToken& t) {
  auto mk = [] { return std::make_shared<Formula>(); };
  std::string tok = t.next();
  if (tok == "true" || tok == "false") {
    auto f = mk();
    f->op = tok == "true" ? Formula::Op::True : Formula::Op::False;
    return f;
  }
  require(tok == "(", "expected '(' or a constant, got '" + tok + "'");
  std::string head = t.next();
  require(head != "(" && head != ")", "expected an operator after '('");
  auto f = mk();
  auto var = [&](const char* what) {
    std::string v = t.next();
    require(v != "(" && v != ")", std::string("expected a ") + what);
    return v;
  };
  auto close = [&] {
    require(t.next() == ")", "expected ')'");
  };
  if (head == "=") {
    f->op = Formula::Op::Eq;
    f->args = {var("variable"), var("variable")};
    close();
  } else if (head == "in") {
    f->op = Formula::Op::In;
    f->args = {var("variable"), var("variable")};
    close();
  } else if (head == "divisible") {
    f->op = Formula::Op::Div;
    std::string p = var("number");
    try {
      f->param = std::stoi(p);
    } catch (...) {
      fail("divisible needs a numeric divisor, got '" + p + "'");
    }
    require(f->param >= 2, "divisible needs a divisor of at least 2");
    f->args = {var("set variable")};
    close();
  } else if (head == "not") {
    f->op = Formula::Op::Not;
    f->kids.push_back(parse_sexpr(t));
    close();
  } else if (head == "and" || head == "or") {
    f->op = head == "and" ? Formula::Op::And : Formula::Op::Or;
    while (t.peek() != ")") f->kids.push_back(parse_sexpr(t));
    close();
  } else if (head == "implies") {
    f->op = Formula::Op::Implies;
    f->kids.push_back(parse_sexpr(t));
    f->kids.push_back(parse_sexpr(t));
    close();
  } else if (head == "exists" || head == "forall" || head == "exists-set" ||
             head == "forall-set") {
    bool setq = head == "exists-set" || head == "forall-set";
    bool ex = head == "exists" || head == "exists-set";
    f->op = setq ? (ex ? Formula::Op::ExistsSet : Formula::Op::ForallSet)
                 : (ex ? Formula::Op::Exists : Formula::Op::Forall);
    f->name = var("variable");
    if (setq)
      require(is_set_var(f->name),
              "set quantifier needs an uppercase variable: " + f->name);
    else
      require(is_element_var(f->name),
              "element quantifier needs a lowercase variable: " + f->name);
    f->kids.push_back(parse_sexpr(t));
    close();
  } else {
    f->op = Formula::Op::Rel;
    f->name = head;
    while (t.peek() != ")") f->args.push_back(var("variable"));
    close();
  }
  return f;
}

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text) {
  auto toks = detail::tokenize(text);
  FormulaPtr f = detail::parse_sexpr(toks);
  require(toks.done(), "trailing input after formula");
  return f;
}

inline std::string formula_to_string(const Formula& f) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::True:
      return "true";
    case Op::False:
      return "false";
    case Op::Rel: {
      std::string s = "(" + f.name;
      for (const auto& a : f.args) s += " " + a;
      return s + ")";
    }
    case Op::Eq:
      return "(= " + f.args[0] + " " + f.args[1] + ")";
    case Op::In:
      return "(in " + f.args[0] + " " + f.args[1] + ")";
    case Op::Div:
      return "(divisible " + std::to_string(f.param) + " " + f.args[0] + ")";
    case Op::Not:
      return "(not " + formula_to_string(*f.kids[0]) + ")";
    case Op::And:
    case Op::Or: {
      std::string s = f.op == Op::And ? "(and" : "(or";
      for (const auto& k : f.kids) s += " " + formula_to_string(*k);
      return s + ")";
    }
    case Op::Implies:
      return "(implies " + formula_to_string(*f.kids[0]) + " " +
             formula_to_string(*f.kids[1]) + ")";
    case Op::Exists:
    case Op::Forall:
    case Op::ExistsSet:
    case Op::ForallSet: {
      const char* head = f.op == Op::Exists      ? "exists"
                         : f.op == Op::Forall    ? "forall"
                         : f.op == Op::ExistsSet ? "exists-set"
                                                 : "forall-set";
      return std::string("(") + head + " " + f.name + " " +
             formula_to_string(*f.kids[0]) + ")";
    }
  }
  fail("unhandled formula op");
}

// ---------------------------------------------------------------------------
// Static checks

// Verifies relation symbols, arities, slot kinds and variable scoping.
// `free_vars` declares the variables the formula may use freely.
inline void check_formula(const Formula& f, const Vocabulary& voc,
                          std::map<std::string, Kind> scope = {}) {
  using Op = Formula::Op;
  auto need_elem = [&](const std::string& v) {
    require(is_element_var(v), "'" + v + "' must be a lowercase element variable");
    auto it = scope.find(v);
    require(it != scope.end(), "unbound variable: " + v);
  };
  auto need_set = [&](const std::string& v) {
    require(is_set_var(v), "'" + v + "' must be an uppercase set variable");
    auto it = scope.find(v);
    require(it != scope.end(), "unbound variable: " + v);
  };
  switch (f.op) {
    case Op::True:
    case Op::False:
      break;
    case Op::Rel: {
      const RelationSymbol& sym = voc.at(f.name);
      require(f.args.size() == sym.kinds.size(),
              "relation " + f.name + " expects " +
                  std::to_string(sym.kinds.size()) + " arguments");
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (sym.kinds[i] == Kind::Element)
          need_elem(f.args[i]);
        else
          need_set(f.args[i]);
      }
      break;
    }
    case Op::Eq:
      need_elem(f.args[0]);
      need_elem(f.args[1]);
      break;
    case Op::In:
      need_elem(f.args[0]);
      need_set(f.args[1]);
      break;
    case Op::Div:
      need_set(f.args[0]);
      break;
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
      for (const auto& k : f.kids) check_formula(*k, voc, scope);
      break;
    case Op::Exists:
    case Op::Forall:
    case Op::ExistsSet:
    case Op::ForallSet: {
      require(!scope.count(f.name),
              "variable rebound inside its own scope: " + f.name);
      bool setq = f.op == Op::ExistsSet || f.op == Op::ForallSet;
      scope[f.name] = setq ? Kind::Set : Kind::Element;
      check_formula(*f.kids[0], voc, scope);
      scope.erase(f.name);
      break;
    }
  }
}

inline int set_quantifier_depth(const Formula& f) {
  int sub = 0;
  for (const auto& k : f.kids) sub = std::max(sub, set_quantifier_depth(*k));
  if (f.op == Formula::Op::ExistsSet || f.op == Formula::Op::ForallSet)
    return sub + 1;
  return sub;
}

// ---------------------------------------------------------------------------
// Evaluation

struct Valuation {
  std::map<std::string, int> elems;
  std::map<std::string, std::uint64_t> sets;
};

namespace detail {

inline bool eval_rec(const Structure& a, const Formula& f, Valuation& val) {
  using Op = Formula::Op;
  switch (f.op) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Rel: {
      int idx = a.voc.index(f.name);
      const RelationSymbol& sym = a.voc.symbols[idx];
      Tuple t;
      for (size_t i = 0; i < f.args.size(); ++i) {
        if (sym.kinds[i] == Kind::Element)
          t.emplace_back(val.elems.at(f.args[i]));
        else
          t.emplace_back(mask_to_set(val.sets.at(f.args[i])));
      }
      return std::binary_search(a.rels[idx].begin(), a.rels[idx].end(), t);
    }
    case Op::Eq:
      return val.elems.at(f.args[0]) == val.elems.at(f.args[1]);
    case Op::In:
      return (val.sets.at(f.args[1]) >> val.elems.at(f.args[0])) & 1;
    case Op::Div:
      return popcount(val.sets.at(f.args[0])) % f.param == 0;
    case Op::Not:
      return !eval_rec(a, *f.kids[0], val);
    case Op::And:
      for (const auto& k : f.kids)
        if (!eval_rec(a, *k, val)) return false;
      return true;
    case Op::Or:
      for (const auto& k : f.kids)
        if (eval_rec(a, *k, val)) return true;
      return false;
    case Op::Implies:
      return !eval_rec(a, *f.kids[0], val) || eval_rec(a, *f.kids[1], val);
    case Op::Exists:
    case Op::Forall: {
      bool ex = f.op == Op::Exists;
      for (int v = 0; v < a.n; ++v) {
        val.elems[f.name] = v;
        bool r = eval_rec(a, *f.kids[0], val);
        if (r == ex) {
          val.elems.erase(f.name);
          return ex;
        }
      }
      val.elems.erase(f.name);
      return !ex;
    }
    case Op::ExistsSet:
    case Op::ForallSet: {
      bool ex = f.op == Op::ExistsSet;
      std::uint64_t top = std::uint64_t{1} << a.n;
      for (std::uint64_t m = 0; m < top; ++m) {
        val.sets[f.name] = m;
        bool r = eval_rec(a, *f.kids[0], val);
        if (r == ex) {
          val.sets.erase(f.name);
          return ex;
        }
      }
      val.sets.erase(f.name);
      return !ex;
    }
  }
  fail("unhandled formula op");
}

}  // namespace detail

// Brute-force model checking.  The guard rejects runs whose set-quantifier
// cost is out of reach: (set-quantifier depth) * n must stay within budget.
inline bool evaluate(const Structure& a, const Formula& f, Valuation val,
                     const Budget& budget = default_budget()) {
  std::map<std::string, Kind> scope;
  for (const auto& [v, x] : val.elems) {
    require(0 <= x && x < a.n, "valuation out of range for " + v);
    scope[v] = Kind::Element;
  }
  for (const auto& [v, m] : val.sets) {
    require(a.n >= 64 || (m >> a.n) == 0, "valuation out of range for " + v);
    scope[v] = Kind::Set;
  }
  check_formula(f, a.voc, scope);
  require(a.n <= 62, "evaluation supports universes up to 62 elements");
  int depth = set_quantifier_depth(f);
  require(depth * a.n <= budget.logic,
          "evaluation budget exceeded: set-quantifier depth " +
              std::to_string(depth) + " on a universe of " +
              std::to_string(a.n) + " needs budget " +
              std::to_string(depth * a.n) + " > " +
              std::to_string(budget.logic));
  return detail::eval_rec(a, f, val);
}

// Closed sentences: does the structure satisfy the formula?
inline bool holds(const Structure& a, const Formula& f,
                  const Budget& budget = default_budget()) {
  return evaluate(a, f, Valuation{}, budget);
}

}  // namespace mso
