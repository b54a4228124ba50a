#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mso/common.hpp"

namespace mso {

enum class Kind : std::uint8_t { Element, Set };

inline std::string kind_name(Kind k) {
  return k == Kind::Element ? "element" : "set";
}

struct RelationSymbol {
  std::string name;
  std::vector<Kind> kinds;

  int arity() const { return static_cast<int>(kinds.size()); }
  bool operator==(const RelationSymbol&) const = default;
};

struct Vocabulary {
  std::vector<RelationSymbol> symbols;

  bool operator==(const Vocabulary&) const = default;

  int index(const std::string& name) const {
    for (size_t i = 0; i < symbols.size(); ++i)
      if (symbols[i].name == name) return static_cast<int>(i);
    return -1;
  }
  const RelationSymbol& at(const std::string& name) const {
    int i = index(name);
    require(i >= 0, "unknown relation symbol: " + name);
    return symbols[i];
  }
};

// A slot is a single element id or a sorted duplicate-free set of ids.
using SetSlot = std::vector<int>;
using Slot = std::variant<int, SetSlot>;
using Tuple = std::vector<Slot>;

// Finite relational structure.  Relations are stored sorted and duplicate
// free, parallel to the vocabulary's symbol list.
struct Structure {
  Vocabulary voc;
  int n = 0;
  std::vector<std::vector<Tuple>> rels;

  bool operator==(const Structure&) const = default;
  bool operator<(const Structure& o) const {
    if (n != o.n) return n < o.n;
    return rels < o.rels;
  }

  std::vector<Tuple>& tuples(const std::string& name) {
    int i = voc.index(name);
    require(i >= 0, "unknown relation symbol: " + name);
    return rels[i];
  }
  const std::vector<Tuple>& tuples(const std::string& name) const {
    int i = voc.index(name);
    require(i >= 0, "unknown relation symbol: " + name);
    return rels[i];
  }

  void normalize() {
    rels.resize(voc.symbols.size());
    for (auto& r : rels) sort_unique(r);
  }
};

inline Structure make_structure(Vocabulary voc, int n) {
  Structure a;
  a.voc = std::move(voc);
  a.n = n;
  a.rels.resize(a.voc.symbols.size());
  return a;
}

// ---------------------------------------------------------------------------
// Validation

inline std::vector<std::string> validate(const Structure& a) {
  std::vector<std::string> out;
  if (a.n < 1) out.push_back("universe must be nonempty");
  std::set<std::string> names;
  for (const auto& sym : a.voc.symbols) {
    if (sym.name.empty()) out.push_back("relation symbol with empty name");
    if (!names.insert(sym.name).second)
      out.push_back("duplicate relation symbol: " + sym.name);
    if (sym.kinds.empty())
      out.push_back("relation " + sym.name + " has arity 0");
  }
  if (a.rels.size() != a.voc.symbols.size()) {
    out.push_back("relation list does not match vocabulary");
    return out;
  }
  auto in_range = [&](int x) { return 0 <= x && x < a.n; };
  for (size_t i = 0; i < a.rels.size(); ++i) {
    const auto& sym = a.voc.symbols[i];
    for (const auto& t : a.rels[i]) {
      if (static_cast<int>(t.size()) != sym.arity()) {
        out.push_back("tuple of wrong arity in relation " + sym.name);
        continue;
      }
      for (size_t s = 0; s < t.size(); ++s) {
        bool is_set = std::holds_alternative<SetSlot>(t[s]);
        if ((sym.kinds[s] == Kind::Set) != is_set) {
          out.push_back("slot " + std::to_string(s) + " of relation " +
                        sym.name + " has wrong kind");
          continue;
        }
        if (is_set) {
          const auto& xs = std::get<SetSlot>(t[s]);
          if (!std::is_sorted(xs.begin(), xs.end()) ||
              std::adjacent_find(xs.begin(), xs.end()) != xs.end())
            out.push_back("set slot not sorted/duplicate-free in " + sym.name);
          for (int x : xs)
            if (!in_range(x))
              out.push_back("element out of range in relation " + sym.name);
        } else if (!in_range(std::get<int>(t[s]))) {
          out.push_back("element out of range in relation " + sym.name);
        }
      }
    }
  }
  return out;
}

inline void check_valid(const Structure& a, const std::string& what) {
  auto errs = validate(a);
  if (!errs.empty()) fail(what + ": " + errs.front());
}

// ---------------------------------------------------------------------------
// JSON round trip.  Canonical form: relations keyed by name in sorted order,
// tuple lists sorted; set slots are sorted arrays.

using Json = nlohmann::ordered_json;

inline Json vocabulary_to_json(const Vocabulary& voc) {
  Json arr = Json::array();
  for (const auto& sym : voc.symbols) {
    Json kinds = Json::array();
    for (Kind k : sym.kinds) kinds.push_back(kind_name(k));
    arr.push_back(Json{{"name", sym.name}, {"kinds", kinds}});
  }
  return arr;
}

inline Vocabulary vocabulary_from_json(const Json& j) {
  require(j.is_array(), "vocabulary must be an array");
  Vocabulary voc;
  for (const auto& e : j) {
    require(e.is_object() && e.contains("name") && e.contains("kinds"),
            "vocabulary entry needs name and kinds");
    RelationSymbol sym;
    sym.name = e.at("name").get<std::string>();
    for (const auto& k : e.at("kinds")) {
      std::string s = k.get<std::string>();
      if (s == "element")
        sym.kinds.push_back(Kind::Element);
      else if (s == "set")
        sym.kinds.push_back(Kind::Set);
      else
        fail("unknown slot kind: " + s);
    }
    voc.symbols.push_back(std::move(sym));
  }
  return voc;
}

inline Json structure_to_json(const Structure& a) {
  Json rels = Json::object();
  std::vector<std::pair<std::string, size_t>> order;
  for (size_t i = 0; i < a.voc.symbols.size(); ++i)
    order.emplace_back(a.voc.symbols[i].name, i);
  std::sort(order.begin(), order.end());
  for (const auto& [name, idx] : order) {
    Json tuples = Json::array();
    std::vector<Tuple> sorted = a.rels[idx];
    sort_unique(sorted);
    for (const auto& t : sorted) {
      Json tup = Json::array();
      for (const auto& s : t) {
        if (std::holds_alternative<int>(s))
          tup.push_back(std::get<int>(s));
        else
          tup.push_back(std::get<SetSlot>(s));
      }
      tuples.push_back(std::move(tup));
    }
    rels[name] = std::move(tuples);
  }
  return Json{{"vocabulary", vocabulary_to_json(a.voc)},
              {"universe", a.n},
              {"relations", std::move(rels)}};
}

inline Structure structure_from_json(const Json& j) {
  require(j.is_object(), "structure must be a JSON object");
  require(j.contains("vocabulary") && j.contains("universe") &&
              j.contains("relations"),
          "structure needs vocabulary, universe and relations");
  Structure a;
  a.voc = vocabulary_from_json(j.at("vocabulary"));
  require(j.at("universe").is_number_integer(), "universe must be an integer");
  a.n = j.at("universe").get<int>();
  a.rels.resize(a.voc.symbols.size());
  require(j.at("relations").is_object(), "relations must be an object");
  for (const auto& [name, tuples] : j.at("relations").items()) {
    int idx = a.voc.index(name);
    require(idx >= 0, "relation not in vocabulary: " + name);
    const auto& sym = a.voc.symbols[idx];
    require(tuples.is_array(), "relation " + name + " must be an array");
    for (const auto& jt : tuples) {
      require(jt.is_array() && static_cast<int>(jt.size()) == sym.arity(),
              "tuple of wrong arity in relation " + name);
      Tuple t;
      for (size_t s = 0; s < jt.size(); ++s) {
        if (sym.kinds[s] == Kind::Element) {
          require(jt[s].is_number_integer(),
                  "element slot must be an integer in " + name);
          t.emplace_back(jt[s].get<int>());
        } else {
          require(jt[s].is_array(), "set slot must be an array in " + name);
          SetSlot xs;
          for (const auto& x : jt[s]) {
            require(x.is_number_integer(),
                    "set slot members must be integers in " + name);
            xs.push_back(x.get<int>());
          }
          sort_unique(xs);
          t.emplace_back(std::move(xs));
        }
      }
      a.rels[idx].push_back(std::move(t));
    }
  }
  a.normalize();
  check_valid(a, "structure");
  return a;
}

// ---------------------------------------------------------------------------
// Relabelling and isomorphism

inline Tuple apply_perm_tuple(const Tuple& t, const std::vector<int>& perm) {
  Tuple out;
  out.reserve(t.size());
  for (const auto& s : t) {
    if (std::holds_alternative<int>(s)) {
      out.emplace_back(perm[std::get<int>(s)]);
    } else {
      SetSlot xs;
      for (int x : std::get<SetSlot>(s)) xs.push_back(perm[x]);
      std::sort(xs.begin(), xs.end());
      out.emplace_back(std::move(xs));
    }
  }
  return out;
}

// perm maps old ids to new ids.
inline Structure apply_perm(const Structure& a, const std::vector<int>& perm) {
  require(static_cast<int>(perm.size()) == a.n, "permutation size mismatch");
  Structure b = make_structure(a.voc, a.n);
  for (size_t i = 0; i < a.rels.size(); ++i)
    for (const auto& t : a.rels[i])
      b.rels[i].push_back(apply_perm_tuple(t, perm));
  b.normalize();
  return b;
}

// Least relabelling under full permutation enumeration; meant for small
// universes (census work caps these well below the guard).
inline Structure canonical_form(const Structure& a) {
  require(a.n <= 9, "canonical_form supports universes up to 9 elements");
  std::vector<int> perm(a.n);
  for (int i = 0; i < a.n; ++i) perm[i] = i;
  std::optional<Structure> best;
  do {
    Structure cand = apply_perm(a, perm);
    if (!best || cand < *best) best = std::move(cand);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best ? *best : a;
}

namespace detail {

// Per-element profile: how often the element occurs in each (relation, slot),
// counting set slots by membership.  Isomorphisms preserve profiles.
inline std::vector<std::vector<int>> element_profiles(const Structure& a) {
  size_t width = 0;
  for (const auto& sym : a.voc.symbols) width += sym.kinds.size();
  std::vector<std::vector<int>> prof(a.n, std::vector<int>(width, 0));
  size_t base = 0;
  for (size_t i = 0; i < a.rels.size(); ++i) {
    for (const auto& t : a.rels[i]) {
      for (size_t s = 0; s < t.size(); ++s) {
        if (std::holds_alternative<int>(t[s]))
          prof[std::get<int>(t[s])][base + s]++;
        else
          for (int x : std::get<SetSlot>(t[s])) prof[x][base + s]++;
      }
    }
    base += a.voc.symbols[i].kinds.size();
  }
  return prof;
}

inline bool extend_iso(const Structure& a, const Structure& b,
                       const std::vector<std::vector<int>>& prof_a,
                       const std::vector<std::vector<int>>& prof_b,
                       std::vector<int>& map, std::vector<bool>& used,
                       int next) {
  if (next == a.n) return apply_perm(a, map) == b;
  for (int cand = 0; cand < b.n; ++cand) {
    if (used[cand] || prof_a[next] != prof_b[cand]) continue;
    map[next] = cand;
    used[cand] = true;
    // Partial consistency: fully mapped element-only tuples must exist in b.
    bool ok = true;
    for (size_t i = 0; i < a.rels.size() && ok; ++i) {
      bool element_only = true;
      for (Kind k : a.voc.symbols[i].kinds)
        if (k == Kind::Set) element_only = false;
      if (!element_only) continue;
      for (const auto& t : a.rels[i]) {
        bool mapped = true;
        Tuple image;
        for (const auto& s : t) {
          int x = std::get<int>(s);
          if (x > next) {
            mapped = false;
            break;
          }
          image.emplace_back(map[x]);
        }
        if (!mapped) continue;
        if (!std::binary_search(b.rels[i].begin(), b.rels[i].end(), image)) {
          ok = false;
          break;
        }
      }
    }
    if (ok && extend_iso(a, b, prof_a, prof_b, map, used, next + 1))
      return true;
    used[cand] = false;
  }
  return false;
}

}  // namespace detail

// Isomorphism over a shared vocabulary; mixing vocabularies is an error.
inline std::optional<std::vector<int>> find_isomorphism(const Structure& a,
                                                        const Structure& b) {
  require(a.voc == b.voc, "isomorphism check across different vocabularies");
  if (a.n != b.n) return std::nullopt;
  for (size_t i = 0; i < a.rels.size(); ++i)
    if (a.rels[i].size() != b.rels[i].size()) return std::nullopt;
  auto prof_a = detail::element_profiles(a);
  auto prof_b = detail::element_profiles(b);
  {
    auto sa = prof_a;
    auto sb = prof_b;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::vector<int> map(a.n, -1);
  std::vector<bool> used(a.n, false);
  if (detail::extend_iso(a, b, prof_a, prof_b, map, used, 0)) return map;
  return std::nullopt;
}

inline bool isomorphic(const Structure& a, const Structure& b) {
  return find_isomorphism(a, b).has_value();
}

// ---------------------------------------------------------------------------
// Pairing: disjoint union with a marker for the left component.  Relation
// names are prefixed so the two vocabularies cannot clash.

inline Structure pair_structures(const Structure& a, const Structure& b) {
  check_valid(a, "pair: left component");
  check_valid(b, "pair: right component");
  Vocabulary voc;
  voc.symbols.push_back({"left", {Kind::Element}});
  for (const auto& sym : a.voc.symbols)
    voc.symbols.push_back({"l_" + sym.name, sym.kinds});
  for (const auto& sym : b.voc.symbols)
    voc.symbols.push_back({"r_" + sym.name, sym.kinds});
  Structure p = make_structure(voc, a.n + b.n);
  for (int i = 0; i < a.n; ++i) p.rels[0].push_back({Slot{i}});
  for (size_t i = 0; i < a.rels.size(); ++i) p.rels[1 + i] = a.rels[i];
  std::vector<int> shift(b.n);
  for (int i = 0; i < b.n; ++i) shift[i] = a.n + i;
  for (size_t i = 0; i < b.rels.size(); ++i)
    for (const auto& t : b.rels[i])
      p.rels[1 + a.rels.size() + i].push_back(apply_perm_tuple(t, shift));
  p.normalize();
  return p;
}

// Extracts one component of a pair; `left` picks the marked half.
inline Structure project_pair(const Structure& p, bool left) {
  int marker = p.voc.index("left");
  require(marker >= 0, "project_pair: missing left marker");
  std::vector<bool> is_left(p.n, false);
  for (const auto& t : p.rels[marker]) is_left[std::get<int>(t[0])] = true;
  std::vector<int> ids;
  for (int i = 0; i < p.n; ++i)
    if (is_left[i] == left) ids.push_back(i);
  require(!ids.empty(), "project_pair: empty component");
  std::vector<int> newid(p.n, -1);
  for (size_t i = 0; i < ids.size(); ++i) newid[ids[i]] = static_cast<int>(i);

  std::string prefix = left ? "l_" : "r_";
  Vocabulary voc;
  std::vector<size_t> src;
  for (size_t i = 0; i < p.voc.symbols.size(); ++i) {
    const auto& sym = p.voc.symbols[i];
    if (sym.name.rfind(prefix, 0) == 0) {
      voc.symbols.push_back({sym.name.substr(2), sym.kinds});
      src.push_back(i);
    }
  }
  Structure out = make_structure(voc, static_cast<int>(ids.size()));
  for (size_t r = 0; r < src.size(); ++r) {
    for (const auto& t : p.rels[src[r]]) {
      Tuple nt;
      bool inside = true;
      for (const auto& s : t) {
        if (std::holds_alternative<int>(s)) {
          int x = newid[std::get<int>(s)];
          if (x < 0) inside = false;
          nt.emplace_back(x);
        } else {
          SetSlot xs;
          for (int v : std::get<SetSlot>(s)) {
            if (newid[v] < 0) inside = false;
            xs.push_back(newid[v]);
          }
          std::sort(xs.begin(), xs.end());
          nt.emplace_back(std::move(xs));
        }
      }
      require(inside, "project_pair: relation crosses the two components");
      out.rels[r].push_back(std::move(nt));
    }
  }
  out.normalize();
  return out;
}

}  // namespace mso
