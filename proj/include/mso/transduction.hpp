#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mso/classes.hpp"
#include "mso/logic.hpp"
#include "mso/structures.hpp"

namespace mso {

// Elementary transduction steps.  A pipeline chains them left to right;
// each step's output vocabulary feeds the next step.
//
//  * Interpretation: keeps the elements satisfying a universe formula
//    (one free element variable `x`) and defines each output relation by a
//    formula whose free variables are positional: slot i is `xi` for an
//    element slot and `Xi` for a set slot.
//  * Filter: passes the structure through iff a closed sentence holds.
//  * Copy k: k disjoint copies, plus a fresh k-ary relation `_copy_k`
//    relating the copies of each element.
//  * Colour k: all k^n ways of adding fresh unary relations `_col_1..k`
//    so that every element carries exactly one colour.
struct InterpretationRelation {
  std::string name;
  std::vector<Kind> kinds;
  FormulaPtr formula;
};

struct Interpretation {
  FormulaPtr universe;
  std::vector<InterpretationRelation> relations;
};

struct Filter {
  FormulaPtr sentence;
};

struct Copy {
  int k = 2;
};

struct Colour {
  int k = 1;
};

using ElementaryStep = std::variant<Interpretation, Filter, Copy, Colour>;

// Class ids are optional metadata: pipelines ending in Copy or Colour have
// fresh relations in their output vocabulary, which no named class carries.
struct Transduction {
  std::optional<ClassId> input;
  std::optional<ClassId> output;
  std::vector<ElementaryStep> steps;
};

// Output elements are tracked back to input elements.
struct OriginTriple {
  Structure input;
  Structure output;
  std::vector<int> origin;  // origin[output id] = input id
};

enum class Dedup {
  OriginIso,  // isomorphism must preserve origins (the default)
  IsoOnly,    // plain isomorphism of outputs
};

// The names added by Copy and Colour; user vocabularies must avoid them.
inline bool is_reserved_relation(const std::string& name) {
  return name.rfind("_copy_", 0) == 0 || name.rfind("_col_", 0) == 0;
}

// ---------------------------------------------------------------------------
// Vocabulary chaining

namespace detail {

inline std::map<std::string, Kind> positional_vars(const std::vector<Kind>& kinds) {
  std::map<std::string, Kind> vars;
  for (size_t i = 0; i < kinds.size(); ++i) {
    std::string v = (kinds[i] == Kind::Element ? "x" : "X") + std::to_string(i + 1);
    vars[v] = kinds[i];
  }
  return vars;
}

}  // namespace detail

// Checks one step against its input vocabulary and returns its output
// vocabulary.  Throws on arity/kind errors, reserved names, or name clashes.
inline Vocabulary step_output_vocabulary(const ElementaryStep& step,
                                         const Vocabulary& in) {
  if (const auto* i = std::get_if<Interpretation>(&step)) {
    require(i->universe != nullptr, "interpretation lacks a universe formula");
    check_formula(*i->universe, in, {{"x", Kind::Element}});
    Vocabulary out;
    for (const auto& r : i->relations) {
      require(!r.name.empty(), "interpretation relation needs a name");
      require(!is_reserved_relation(r.name),
              "relation name is reserved: " + r.name);
      require(!r.kinds.empty(), "relation " + r.name + " needs positive arity");
      require(r.formula != nullptr,
              "interpretation relation " + r.name + " lacks a formula");
      check_formula(*r.formula, in, detail::positional_vars(r.kinds));
      for (const auto& s : out.symbols)
        require(s.name != r.name, "duplicate output relation: " + r.name);
      out.symbols.push_back({r.name, r.kinds});
    }
    return out;
  }
  if (const auto* f = std::get_if<Filter>(&step)) {
    require(f->sentence != nullptr, "filter lacks a sentence");
    check_formula(*f->sentence, in, {});
    return in;
  }
  if (const auto* c = std::get_if<Copy>(&step)) {
    require(c->k >= 2, "copy needs k >= 2");
    std::string name = "_copy_" + std::to_string(c->k);
    require(in.index(name) < 0, "copy relation already present: " + name);
    Vocabulary out = in;
    out.symbols.push_back({name, std::vector<Kind>(c->k, Kind::Element)});
    return out;
  }
  const auto& c = std::get<Colour>(step);
  require(c.k >= 1, "colour needs k >= 1");
  Vocabulary out = in;
  for (int i = 1; i <= c.k; ++i) {
    std::string name = "_col_" + std::to_string(i);
    require(in.index(name) < 0, "colour relation already present: " + name);
    out.symbols.push_back({name, {Kind::Element}});
  }
  return out;
}

namespace detail {

inline std::map<std::string, std::vector<Kind>> symbol_map(const Vocabulary& v) {
  std::map<std::string, std::vector<Kind>> m;
  for (const auto& s : v.symbols) m[s.name] = s.kinds;
  return m;
}

// Reorders relations into the target vocabulary; symbol sets must agree.
inline Structure align_vocabulary(const Structure& s, const Vocabulary& target) {
  Structure b = make_structure(target, s.n);
  for (size_t i = 0; i < target.symbols.size(); ++i)
    b.rels[i] = s.tuples(target.symbols[i].name);
  return b;
}

}  // namespace detail

// Statically checks the full chain when the input class is declared.
inline void validate_transduction(const Transduction& t) {
  // Without a declared input class, chaining is checked at apply time
  // against the given structure's vocabulary.
  if (!t.input) return;
  Vocabulary voc = vocabulary_of(*t.input);
  for (const auto& step : t.steps) voc = step_output_vocabulary(step, voc);
  if (t.output) {
    require(detail::symbol_map(voc) == detail::symbol_map(vocabulary_of(*t.output)),
            "step chain does not produce the declared output vocabulary");
  }
}

// ---------------------------------------------------------------------------
// JSON form

inline Json step_to_json(const ElementaryStep& step) {
  Json j;
  if (const auto* i = std::get_if<Interpretation>(&step)) {
    j["step"] = "interpretation";
    j["universe"] = formula_to_string(*i->universe);
    Json rels = Json::array();
    for (const auto& r : i->relations) {
      Json jr;
      jr["name"] = r.name;
      jr["kinds"] = Json::array();
      for (Kind k : r.kinds)
        jr["kinds"].push_back(k == Kind::Element ? "element" : "set");
      jr["formula"] = formula_to_string(*r.formula);
      rels.push_back(jr);
    }
    j["relations"] = rels;
  } else if (const auto* f = std::get_if<Filter>(&step)) {
    j["step"] = "filter";
    j["sentence"] = formula_to_string(*f->sentence);
  } else if (const auto* c = std::get_if<Copy>(&step)) {
    j["step"] = "copy";
    j["k"] = c->k;
  } else {
    j["step"] = "colour";
    j["k"] = std::get<Colour>(step).k;
  }
  return j;
}

inline ElementaryStep step_from_json(const Json& j) {
  require(j.is_object() && j.contains("step") && j["step"].is_string(),
          "step needs a \"step\" tag");
  std::string tag = j["step"];
  if (tag == "interpretation") {
    Interpretation i;
    require(j.contains("universe") && j["universe"].is_string(),
            "interpretation needs a universe formula");
    i.universe = parse_formula(j["universe"]);
    require(j.contains("relations") && j["relations"].is_array(),
            "interpretation needs a relations array");
    for (const auto& jr : j["relations"]) {
      InterpretationRelation r;
      require(jr.contains("name") && jr["name"].is_string() &&
                  jr.contains("kinds") && jr["kinds"].is_array() &&
                  jr.contains("formula") && jr["formula"].is_string(),
              "interpretation relation needs name, kinds and formula");
      r.name = jr["name"];
      for (const auto& k : jr["kinds"]) {
        require(k.is_string() && (k == "element" || k == "set"),
                "relation kind must be \"element\" or \"set\"");
        r.kinds.push_back(k == "element" ? Kind::Element : Kind::Set);
      }
      r.formula = parse_formula(jr["formula"]);
      i.relations.push_back(std::move(r));
    }
    return i;
  }
  if (tag == "filter") {
    require(j.contains("sentence") && j["sentence"].is_string(),
            "filter needs a sentence");
    return Filter{parse_formula(j["sentence"])};
  }
  if (tag == "copy" || tag == "colour") {
    require(j.contains("k") && j["k"].is_number_integer(),
            tag + " needs an integer k");
    int k = j["k"];
    if (tag == "copy") {
      require(k >= 2, "copy needs k >= 2");
      return Copy{k};
    }
    require(k >= 1, "colour needs k >= 1");
    return Colour{k};
  }
  fail("unknown step: " + tag);
}

inline Json transduction_to_json(const Transduction& t) {
  Json j;
  j["input"] = t.input ? class_to_json(*t.input) : Json(nullptr);
  j["output"] = t.output ? class_to_json(*t.output) : Json(nullptr);
  j["steps"] = Json::array();
  for (const auto& s : t.steps) j["steps"].push_back(step_to_json(s));
  return j;
}

inline Transduction transduction_from_json(const Json& j) {
  require(j.is_object() && j.contains("steps") && j["steps"].is_array(),
          "transduction needs a steps array");
  Transduction t;
  if (j.contains("input") && !j["input"].is_null())
    t.input = class_from_json(j["input"]);
  if (j.contains("output") && !j["output"].is_null())
    t.output = class_from_json(j["output"]);
  for (const auto& js : j["steps"]) t.steps.push_back(step_from_json(js));
  validate_transduction(t);
  return t;
}

// ---------------------------------------------------------------------------
// Application

namespace detail {

struct TransState {
  Structure s;
  std::vector<int> origin;
};

inline void apply_interpretation(const Interpretation& step, TransState& st,
                                 std::vector<TransState>& out,
                                 const Budget& budget) {
  const Structure& a = st.s;
  std::vector<int> universe;
  for (int v = 0; v < a.n; ++v) {
    Valuation val;
    val.elems["x"] = v;
    if (evaluate(a, *step.universe, val, budget)) universe.push_back(v);
  }
  if (universe.empty()) return;  // no output on an empty universe
  int m = static_cast<int>(universe.size());

  Vocabulary voc;
  for (const auto& r : step.relations) voc.symbols.push_back({r.name, r.kinds});
  Structure b = make_structure(voc, m);

  std::uint64_t in_mask_all = 0;
  for (int v : universe) in_mask_all |= std::uint64_t{1} << v;

  for (size_t ri = 0; ri < step.relations.size(); ++ri) {
    const auto& r = step.relations[ri];
    double candidates = 1;
    for (Kind k : r.kinds)
      candidates *= k == Kind::Element ? static_cast<double>(m)
                                       : std::pow(2.0, m);
    require(candidates <= (1 << 22),
            "interpretation tuple space too large for relation " + r.name);

    Valuation val;
    Tuple tuple(r.kinds.size());
    auto rec = [&](auto&& self, size_t slot) -> void {
      if (slot == r.kinds.size()) {
        if (evaluate(a, *r.formula, val, budget))
          b.rels[ri].push_back(tuple);
        return;
      }
      std::string var = (r.kinds[slot] == Kind::Element ? "x" : "X") +
                        std::to_string(slot + 1);
      if (r.kinds[slot] == Kind::Element) {
        for (int j = 0; j < m; ++j) {
          val.elems[var] = universe[j];
          tuple[slot] = j;
          self(self, slot + 1);
        }
        val.elems.erase(var);
      } else {
        for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << m); ++sub) {
          std::uint64_t in_mask = 0;
          for (int j = 0; j < m; ++j)
            if ((sub >> j) & 1) in_mask |= std::uint64_t{1} << universe[j];
          val.sets[var] = in_mask;
          tuple[slot] = mask_to_set(sub);
          self(self, slot + 1);
        }
        val.sets.erase(var);
      }
    };
    rec(rec, 0);
  }
  b.normalize();

  std::vector<int> origin(m);
  for (int j = 0; j < m; ++j) origin[j] = st.origin[universe[j]];
  out.push_back({std::move(b), std::move(origin)});
}

inline void apply_copy(const Copy& step, TransState& st,
                       std::vector<TransState>& out) {
  const Structure& a = st.s;
  int k = step.k, n = a.n;
  Vocabulary voc = a.voc;
  std::string fresh = "_copy_" + std::to_string(k);
  voc.symbols.push_back({fresh, std::vector<Kind>(k, Kind::Element)});
  Structure b = make_structure(voc, k * n);
  // copy c of element v gets id c*n + v
  for (size_t ri = 0; ri < a.rels.size(); ++ri)
    for (const auto& t : a.rels[ri])
      for (int c = 0; c < k; ++c) {
        std::vector<int> shift(n);
        for (int v = 0; v < n; ++v) shift[v] = c * n + v;
        b.rels[ri].push_back(apply_perm_tuple(t, shift));
      }
  auto& fresh_rel = b.rels.back();
  for (int v = 0; v < n; ++v) {
    Tuple t;
    for (int c = 0; c < k; ++c) t.emplace_back(c * n + v);
    fresh_rel.push_back(std::move(t));
  }
  b.normalize();
  std::vector<int> origin(k * n);
  for (int c = 0; c < k; ++c)
    for (int v = 0; v < n; ++v) origin[c * n + v] = st.origin[v];
  out.push_back({std::move(b), std::move(origin)});
}

inline void apply_colour(const Colour& step, TransState& st,
                         std::vector<TransState>& out, const Budget& budget) {
  const Structure& a = st.s;
  int k = step.k, n = a.n;
  double fanout = std::pow(static_cast<double>(k), n);
  require(fanout <= static_cast<double>(budget.colour_fanout),
          "colouring fan-out " + std::to_string(k) + "^" + std::to_string(n) +
              " exceeds the budget");
  Vocabulary voc = a.voc;
  for (int i = 1; i <= k; ++i)
    voc.symbols.push_back({"_col_" + std::to_string(i), {Kind::Element}});
  std::vector<int> colour(n, 0);
  while (true) {
    Structure b = make_structure(voc, n);
    b.rels = a.rels;
    b.rels.resize(voc.symbols.size());
    for (int v = 0; v < n; ++v)
      b.rels[a.rels.size() + colour[v]].push_back(Tuple{v});
    b.normalize();
    out.push_back({std::move(b), st.origin});
    int i = n - 1;
    while (i >= 0 && colour[i] == k - 1) colour[i--] = 0;
    if (i < 0) break;
    ++colour[i];
  }
}

// Canonical key of an output under isomorphisms that preserve origins: only
// elements with equal origins may be exchanged.
inline std::string origin_key(const Structure& s, const std::vector<int>& origin) {
  int n = s.n;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return origin[x] < origin[y]; });
  // Relabel so equal-origin elements form consecutive blocks.
  std::vector<int> base(n);
  for (int pos = 0; pos < n; ++pos) base[order[pos]] = pos;
  Structure sorted = apply_perm(s, base);
  std::vector<std::pair<int, int>> blocks;  // [begin, end) with equal origin
  std::int64_t perms = 1;
  for (int pos = 0; pos < n;) {
    int end = pos;
    while (end < n && origin[order[end]] == origin[order[pos]]) ++end;
    blocks.push_back({pos, end});
    for (int z = 2; z <= end - pos; ++z) perms *= z;
    require(perms <= 40320, "origin-preserving dedup space too large");
    pos = end;
  }
  std::vector<std::vector<int>> block_perm;
  for (auto [b, e] : blocks) {
    std::vector<int> p(e - b);
    for (int i = 0; i < e - b; ++i) p[i] = i;
    block_perm.push_back(p);
  }
  std::string best;
  while (true) {
    std::vector<int> perm(n);
    for (size_t bi = 0; bi < blocks.size(); ++bi)
      for (int i = 0; i < blocks[bi].second - blocks[bi].first; ++i)
        perm[blocks[bi].first + i] = blocks[bi].first + block_perm[bi][i];
    std::string dump = structure_to_json(apply_perm(sorted, perm)).dump();
    if (best.empty() || dump < best) best = dump;
    size_t bi = 0;
    while (bi < blocks.size() &&
           !std::next_permutation(block_perm[bi].begin(), block_perm[bi].end()))
      ++bi;
    if (bi == blocks.size()) break;
  }
  std::string key = best + "#";
  for (int pos = 0; pos < n; ++pos)
    key += std::to_string(origin[order[pos]]) + ",";
  return key;
}

}  // namespace detail

// Runs the pipeline and deduplicates the results.  Output order is
// deterministic (sorted by canonical key).
inline std::vector<OriginTriple> apply(const Transduction& t, const Structure& a,
                                       const Budget& budget = default_budget(),
                                       Dedup dedup = Dedup::OriginIso) {
  check_valid(a, "transduction input");
  if (t.input) {
    require(detail::symbol_map(a.voc) == detail::symbol_map(vocabulary_of(*t.input)),
            "structure does not match the transduction's input vocabulary");
  }
  std::vector<detail::TransState> states;
  {
    std::vector<int> id(a.n);
    for (int v = 0; v < a.n; ++v) id[v] = v;
    states.push_back({a, id});
  }
  Vocabulary voc = a.voc;
  for (const auto& step : t.steps) {
    voc = step_output_vocabulary(step, voc);
    std::vector<detail::TransState> next;
    for (auto& st : states) {
      if (const auto* i = std::get_if<Interpretation>(&step))
        detail::apply_interpretation(*i, st, next, budget);
      else if (const auto* f = std::get_if<Filter>(&step)) {
        if (holds(st.s, *f->sentence, budget)) next.push_back(std::move(st));
      } else if (const auto* c = std::get_if<Copy>(&step))
        detail::apply_copy(*c, st, next);
      else
        detail::apply_colour(std::get<Colour>(step), st, next, budget);
      require(next.size() <= (1 << 17), "too many intermediate structures");
    }
    states = std::move(next);
  }
  if (t.output) {
    // Reorder relations into the declared class's vocabulary.
    Vocabulary target = vocabulary_of(*t.output);
    require(detail::symbol_map(voc) == detail::symbol_map(target),
            "step chain does not produce the declared output vocabulary");
    for (auto& st : states) st.s = detail::align_vocabulary(st.s, target);
  }

  std::vector<OriginTriple> out;
  if (dedup == Dedup::OriginIso) {
    std::map<std::string, OriginTriple> seen;
    for (auto& st : states) {
      std::string key = detail::origin_key(st.s, st.origin);
      if (!seen.count(key)) seen[key] = {a, std::move(st.s), std::move(st.origin)};
    }
    for (auto& [key, triple] : seen) out.push_back(std::move(triple));
  } else {
    for (auto& st : states) {
      bool dup = false;
      for (const auto& kept : out)
        if (kept.output.n == st.s.n && isomorphic(kept.output, st.s)) {
          dup = true;
          break;
        }
      if (!dup) out.push_back({a, std::move(st.s), std::move(st.origin)});
    }
    std::sort(out.begin(), out.end(), [](const OriginTriple& x, const OriginTriple& y) {
      return structure_to_json(x.output).dump() < structure_to_json(y.output).dump();
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Combinators

inline Transduction compose(const Transduction& t1, const Transduction& t2) {
  if (t1.output && t2.input)
    require(*t1.output == *t2.input,
            "composition class mismatch: " + class_name(*t1.output) + " vs " +
                class_name(*t2.input));
  Transduction t;
  t.input = t1.input;
  t.output = t2.output;
  t.steps = t1.steps;
  t.steps.insert(t.steps.end(), t2.steps.begin(), t2.steps.end());
  validate_transduction(t);
  return t;
}

inline bool is_deterministic(const Transduction& t) {
  for (const auto& s : t.steps)
    if (std::holds_alternative<Colour>(s)) return false;
  return true;
}

// The identity pipeline on a class: universe formula keeps everything and
// every relation is copied by its own atom.
inline Transduction identity_transduction(const ClassId& c) {
  Vocabulary voc = vocabulary_of(c);
  Interpretation i;
  i.universe = parse_formula("(= x x)");
  for (const auto& sym : voc.symbols) {
    InterpretationRelation r;
    r.name = sym.name;
    r.kinds = sym.kinds;
    std::string atom = "(" + sym.name;
    for (size_t s = 0; s < sym.kinds.size(); ++s)
      atom += (sym.kinds[s] == Kind::Element ? " x" : " X") + std::to_string(s + 1);
    r.formula = parse_formula(atom + ")");
    i.relations.push_back(std::move(r));
  }
  Transduction t;
  t.input = c;
  t.output = c;
  t.steps.push_back(std::move(i));
  validate_transduction(t);
  return t;
}

// Predicate transport: A satisfies the composed language iff some output of
// the pipeline satisfies the given predicate.
using StructurePredicate = std::function<bool(const Structure&)>;

inline StructurePredicate language_compose(Transduction t, StructurePredicate pred,
                                           Budget budget = default_budget()) {
  return [t = std::move(t), pred = std::move(pred), budget](const Structure& a) {
    for (const auto& triple : apply(t, a, budget))
      if (pred(triple.output)) return true;
    return false;
  };
}

// ---------------------------------------------------------------------------
// Encoding verification

// A codec leg is either a transduction (with origin tracking) or a native
// multivalued map.
using NativeMap = std::function<std::vector<Structure>(const Structure&)>;

struct Codec {
  std::optional<Transduction> trans;
  NativeMap native;
};

inline Codec codec_of(Transduction t) { return {std::move(t), nullptr}; }
inline Codec codec_of(NativeMap f) { return {std::nullopt, std::move(f)}; }

struct EncodingReport {
  int total = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

namespace detail {

struct CodecOutput {
  Structure s;
  std::optional<std::vector<int>> origin;
};

inline std::vector<CodecOutput> run_codec(const Codec& c, const Structure& a,
                                          const Budget& budget) {
  std::vector<CodecOutput> out;
  if (c.trans) {
    for (auto& triple : apply(*c.trans, a, budget))
      out.push_back({std::move(triple.output), std::move(triple.origin)});
  } else {
    require(c.native != nullptr, "codec has neither a transduction nor a map");
    for (auto& s : c.native(a)) out.push_back({std::move(s), std::nullopt});
  }
  return out;
}

// Is `map` an isomorphism from `from` onto `to`?
inline bool is_isomorphism_map(const Structure& from, const Structure& to,
                               const std::vector<int>& map) {
  if (from.n != to.n || static_cast<int>(map.size()) != from.n) return false;
  std::vector<bool> hit(to.n, false);
  for (int v : map) {
    if (v < 0 || v >= to.n || hit[v]) return false;
    hit[v] = true;
  }
  if (symbol_map(from.voc) != symbol_map(to.voc)) return false;
  for (const auto& sym : from.voc.symbols) {
    auto image = from.tuples(sym.name);
    for (auto& t : image) t = apply_perm_tuple(t, map);
    std::sort(image.begin(), image.end());
    if (image != to.tuples(sym.name)) return false;
  }
  return true;
}

}  // namespace detail

// Round-trip check: for every corpus structure A, some element of
// dec(enc(A)) must be isomorphic to A.  When both legs carry origins, the
// composed origin map itself must be such an isomorphism.
inline EncodingReport check_encoding(const Codec& enc, const Codec& dec,
                                     const std::vector<Structure>& corpus,
                                     const Budget& budget = default_budget()) {
  EncodingReport report;
  for (const auto& a : corpus) {
    ++report.total;
    std::string label = "structure #" + std::to_string(report.total);
    std::vector<detail::CodecOutput> encoded;
    try {
      encoded = detail::run_codec(enc, a, budget);
    } catch (const error& e) {
      report.failures.push_back(label + ": encode failed: " + e.what());
      continue;
    }
    if (encoded.empty()) {
      report.failures.push_back(label + ": encoder produced no output");
      continue;
    }
    bool found = false;
    std::string reason = "no decoded output isomorphic to the input";
    for (const auto& e : encoded) {
      std::vector<detail::CodecOutput> decoded;
      try {
        decoded = detail::run_codec(dec, e.s, budget);
      } catch (const error& err) {
        reason = std::string("decode failed: ") + err.what();
        continue;
      }
      for (const auto& d : decoded) {
        if (e.origin && d.origin) {
          // origin of the decode leg lands in the encoded structure; compose.
          std::vector<int> composed(d.s.n);
          for (int v = 0; v < d.s.n; ++v) composed[v] = (*e.origin)[(*d.origin)[v]];
          if (detail::is_isomorphism_map(d.s, a, composed)) {
            found = true;
            break;
          }
          reason = "decoded output found but origins do not compose to an isomorphism";
        } else if (detail::symbol_map(d.s.voc) == detail::symbol_map(a.voc) &&
                   isomorphic(detail::align_vocabulary(d.s, a.voc), a)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) report.failures.push_back(label + ": " + reason);
  }
  return report;
}

}  // namespace mso
