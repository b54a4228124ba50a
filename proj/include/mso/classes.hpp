#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "mso/bigint.hpp"
#include "mso/gf.hpp"
#include "mso/structures.hpp"
#include "mso/tree.hpp"

namespace mso {

enum class ClassTag {
  Strings,
  Trees,
  LabelledTrees,
  OrderedTrees,
  BinaryTrees,
  BoundedHeightTrees,
  GraphsEdge,
  GraphsIncidence,
  AcyclicGraphs,
  Hypergraphs,
  LaminarHypergraphs,
  KUniformHypergraphs,
  KAryRelations,
  BipartiteGraphs,
  Matrices,
  MatroidIndependence,
  MatroidNull,
  Bool,
  Pairs,
};

// A class of structures: a tag plus parameters.  `param` holds the alphabet
// size, label count, uniformity, arity, height bound or field order,
// depending on the tag.
struct ClassId {
  ClassTag tag = ClassTag::Trees;
  int param = 0;
  std::shared_ptr<ClassId> left, right;  // Pairs only

  bool operator==(const ClassId& o) const {
    if (tag != o.tag || param != o.param) return false;
    if (tag != ClassTag::Pairs) return true;
    return *left == *o.left && *right == *o.right;
  }
};

inline ClassId class_id(ClassTag tag, int param = 0) { return {tag, param, nullptr, nullptr}; }
inline ClassId pairs_class(ClassId l, ClassId r) {
  ClassId c{ClassTag::Pairs, 0, std::make_shared<ClassId>(std::move(l)),
            std::make_shared<ClassId>(std::move(r))};
  return c;
}

namespace detail {
struct TagInfo {
  ClassTag tag;
  const char* name;
  const char* param;  // nullptr when the tag takes no parameter
};
inline const std::vector<TagInfo>& tag_table() {
  static const std::vector<TagInfo> t = {
      {ClassTag::Strings, "Strings", "k"},
      {ClassTag::Trees, "Trees", nullptr},
      {ClassTag::LabelledTrees, "LabelledTrees", "k"},
      {ClassTag::OrderedTrees, "OrderedTrees", nullptr},
      {ClassTag::BinaryTrees, "BinaryTrees", nullptr},
      {ClassTag::BoundedHeightTrees, "BoundedHeightTrees", "h"},
      {ClassTag::GraphsEdge, "GraphsEdge", nullptr},
      {ClassTag::GraphsIncidence, "GraphsIncidence", nullptr},
      {ClassTag::AcyclicGraphs, "AcyclicGraphs", nullptr},
      {ClassTag::Hypergraphs, "Hypergraphs", nullptr},
      {ClassTag::LaminarHypergraphs, "LaminarHypergraphs", nullptr},
      {ClassTag::KUniformHypergraphs, "KUniformHypergraphs", "k"},
      {ClassTag::KAryRelations, "KAryRelations", "k"},
      {ClassTag::BipartiteGraphs, "BipartiteGraphs", nullptr},
      {ClassTag::Matrices, "Matrices", "q"},
      {ClassTag::MatroidIndependence, "MatroidIndependence", nullptr},
      {ClassTag::MatroidNull, "MatroidNull", "q"},
      {ClassTag::Bool, "Bool", nullptr},
      {ClassTag::Pairs, "Pairs", nullptr},
  };
  return t;
}
inline const TagInfo& tag_info(ClassTag tag) {
  for (const auto& i : tag_table())
    if (i.tag == tag) return i;
  fail("unknown class tag");
}
}  // namespace detail

inline std::string class_name(const ClassId& c) {
  const auto& info = detail::tag_info(c.tag);
  if (c.tag == ClassTag::Pairs)
    return std::string("Pairs(") + class_name(*c.left) + "," +
           class_name(*c.right) + ")";
  if (info.param) return std::string(info.name) + "(" + std::to_string(c.param) + ")";
  return info.name;
}

inline Json class_to_json(const ClassId& c) {
  const auto& info = detail::tag_info(c.tag);
  Json j{{"tag", info.name}};
  if (info.param) j[info.param] = c.param;
  if (c.tag == ClassTag::Pairs) {
    j["left"] = class_to_json(*c.left);
    j["right"] = class_to_json(*c.right);
  }
  return j;
}

inline ClassId class_from_json(const Json& j) {
  require(j.is_object() && j.contains("tag"), "class id needs a tag");
  std::string tag = j.at("tag").get<std::string>();
  for (const auto& info : detail::tag_table()) {
    if (tag != info.name) continue;
    ClassId c{info.tag, 0, nullptr, nullptr};
    if (info.param) {
      require(j.contains(info.param),
              std::string(info.name) + " needs parameter " + info.param);
      c.param = j.at(info.param).get<int>();
      require(c.param >= 1, std::string("parameter ") + info.param +
                                " must be positive");
      if (info.tag == ClassTag::Matrices || info.tag == ClassTag::MatroidNull)
        gf::check_prime(c.param);
      if (info.tag == ClassTag::Strings || info.tag == ClassTag::LabelledTrees)
        require(c.param >= 2, "alphabet/label count must be at least 2");
      if (info.tag == ClassTag::MatroidNull)
        require(c.param >= 2, "field order must be at least 2");
    }
    if (info.tag == ClassTag::Pairs) {
      require(j.contains("left") && j.contains("right"),
              "Pairs needs left and right class ids");
      c.left = std::make_shared<ClassId>(class_from_json(j.at("left")));
      c.right = std::make_shared<ClassId>(class_from_json(j.at("right")));
    }
    return c;
  }
  fail("unknown class tag: " + tag);
}

// ---------------------------------------------------------------------------
// Vocabularies

inline Vocabulary vocabulary_of(const ClassId& c) {
  Vocabulary v;
  auto unary_set = [](const std::string& name) {
    return RelationSymbol{name, {Kind::Set}};
  };
  auto binary = [](const std::string& name) {
    return RelationSymbol{name, {Kind::Element, Kind::Element}};
  };
  auto unary = [](const std::string& name) {
    return RelationSymbol{name, {Kind::Element}};
  };
  switch (c.tag) {
    case ClassTag::Strings:
      v.symbols.push_back(binary("lt"));
      for (int i = 0; i < c.param; ++i)
        v.symbols.push_back(unary("letter" + std::to_string(i)));
      break;
    case ClassTag::Trees:
    case ClassTag::BinaryTrees:
    case ClassTag::BoundedHeightTrees:
      v.symbols.push_back(binary("parent"));
      break;
    case ClassTag::LabelledTrees:
      v.symbols.push_back(binary("parent"));
      for (int i = 0; i < c.param; ++i)
        v.symbols.push_back(unary("label" + std::to_string(i)));
      break;
    case ClassTag::OrderedTrees:
      v.symbols.push_back(binary("parent"));
      v.symbols.push_back(binary("next"));
      break;
    case ClassTag::GraphsEdge:
    case ClassTag::AcyclicGraphs:
      v.symbols.push_back(binary("edge"));
      break;
    case ClassTag::GraphsIncidence:
      v.symbols.push_back(binary("inc"));
      break;
    case ClassTag::Hypergraphs:
    case ClassTag::LaminarHypergraphs:
    case ClassTag::KUniformHypergraphs:
      v.symbols.push_back(unary_set("edge"));
      break;
    case ClassTag::KAryRelations: {
      std::vector<Kind> kinds(c.param, Kind::Element);
      v.symbols.push_back({"rel", kinds});
      break;
    }
    case ClassTag::BipartiteGraphs:
      v.symbols.push_back(binary("edge"));
      v.symbols.push_back(unary("left"));
      break;
    case ClassTag::Matrices:
      for (int a = 0; a < c.param; ++a)
        v.symbols.push_back(binary("entry" + std::to_string(a)));
      break;
    case ClassTag::MatroidIndependence:
      v.symbols.push_back(unary_set("indep"));
      break;
    case ClassTag::MatroidNull: {
      std::vector<Kind> kinds(c.param - 1, Kind::Set);
      v.symbols.push_back({"null", kinds});
      break;
    }
    case ClassTag::Bool:
      v.symbols.push_back(unary("val"));
      break;
    case ClassTag::Pairs: {
      Vocabulary l = vocabulary_of(*c.left), r = vocabulary_of(*c.right);
      v.symbols.push_back(unary("left"));
      for (const auto& s : l.symbols) v.symbols.push_back({"l_" + s.name, s.kinds});
      for (const auto& s : r.symbols) v.symbols.push_back({"r_" + s.name, s.kinds});
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Membership

namespace detail {

inline void check_symmetric_irreflexive(const Structure& a,
                                        const std::string& rel,
                                        std::vector<std::string>& out) {
  const auto& ts = a.tuples(rel);
  std::set<std::pair<int, int>> have;
  for (const auto& t : ts) {
    int x = std::get<int>(t[0]), y = std::get<int>(t[1]);
    if (x == y) out.push_back(rel + " must be irreflexive");
    have.insert({x, y});
  }
  for (const auto& [x, y] : have)
    if (!have.count({y, x})) out.push_back(rel + " must be symmetric");
}

inline std::vector<std::uint64_t> hyperedges(const Structure& a) {
  std::vector<std::uint64_t> out;
  for (const auto& t : a.tuples("edge"))
    out.push_back(set_to_mask(std::get<SetSlot>(t[0])));
  return out;
}

inline bool graph_acyclic(int n, const std::set<std::pair<int, int>>& edges) {
  std::vector<int> uf(n);
  for (int i = 0; i < n; ++i) uf[i] = i;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& [x, y] : edges) {
    if (x >= y) continue;  // undirected edge stored both ways
    int a = find(x), b = find(y);
    if (a == b) return false;
    uf[a] = b;
  }
  return true;
}

// Coefficient vector of a null tuple: entry i of the vector is c+1 when
// element i lies in the tuple's slot c.  Slots must be pairwise disjoint.
inline std::optional<gf::Vec> null_tuple_vector(const Tuple& t, int n) {
  gf::Vec v(n, 0);
  for (size_t c = 0; c < t.size(); ++c)
    for (int x : std::get<SetSlot>(t[c])) {
      if (v[x] != 0) return std::nullopt;
      v[x] = static_cast<std::uint8_t>(c + 1);
    }
  return v;
}

}  // namespace detail

// Violations of class membership; empty means `a` belongs to the class.
// The vocabulary must match exactly.
inline std::vector<std::string> class_violations(const ClassId& c,
                                                 const Structure& a) {
  std::vector<std::string> out = validate(a);
  if (!out.empty()) return out;
  if (!(a.voc == vocabulary_of(c))) {
    out.push_back("vocabulary does not match class " + class_name(c));
    return out;
  }
  switch (c.tag) {
    case ClassTag::Strings: {
      // lt must be a strict total order
      std::set<std::pair<int, int>> lt;
      for (const auto& t : a.tuples("lt"))
        lt.insert({std::get<int>(t[0]), std::get<int>(t[1])});
      for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < a.n; ++y) {
          if (x == y) {
            if (lt.count({x, x})) out.push_back("lt must be irreflexive");
          } else if (lt.count({x, y}) == lt.count({y, x})) {
            out.push_back("lt must order every pair exactly one way");
          }
        }
      for (const auto& [x, y] : lt)
        for (int z = 0; z < a.n; ++z)
          if (lt.count({y, z}) && !lt.count({x, z}))
            out.push_back("lt must be transitive");
      std::vector<int> letters(a.n, 0);
      for (int i = 0; i < c.param; ++i)
        for (const auto& t : a.tuples("letter" + std::to_string(i)))
          letters[std::get<int>(t[0])]++;
      for (int x = 0; x < a.n; ++x)
        if (letters[x] != 1)
          out.push_back("every position needs exactly one letter");
      break;
    }
    case ClassTag::Trees:
    case ClassTag::LabelledTrees:
    case ClassTag::OrderedTrees:
    case ClassTag::BinaryTrees:
    case ClassTag::BoundedHeightTrees: {
      try {
        RootedTree t = tree_from_structure(a);
        if (c.tag == ClassTag::BinaryTrees)
          for (const auto& cs : t.children)
            if (cs.size() > 2) out.push_back("node with more than two children");
        if (c.tag == ClassTag::BoundedHeightTrees && t.height() > c.param)
          out.push_back("tree height exceeds " + std::to_string(c.param));
      } catch (const error& e) {
        out.push_back(e.what());
      }
      break;
    }
    case ClassTag::GraphsEdge:
      detail::check_symmetric_irreflexive(a, "edge", out);
      break;
    case ClassTag::AcyclicGraphs: {
      detail::check_symmetric_irreflexive(a, "edge", out);
      std::set<std::pair<int, int>> edges;
      for (const auto& t : a.tuples("edge"))
        edges.insert({std::get<int>(t[0]), std::get<int>(t[1])});
      if (out.empty() && !detail::graph_acyclic(a.n, edges))
        out.push_back("graph contains a cycle");
      break;
    }
    case ClassTag::GraphsIncidence: {
      std::set<int> vs, es;
      for (const auto& t : a.tuples("inc")) {
        vs.insert(std::get<int>(t[0]));
        es.insert(std::get<int>(t[1]));
      }
      for (int x : vs)
        if (es.count(x))
          out.push_back("id used both as vertex and as edge");
      std::map<int, std::set<int>> ends;
      for (const auto& t : a.tuples("inc"))
        ends[std::get<int>(t[1])].insert(std::get<int>(t[0]));
      std::set<std::set<int>> seen;
      for (const auto& [e, vset] : ends) {
        if (vset.size() != 2)
          out.push_back("edge id must be incident to exactly two vertices");
        else if (!seen.insert(vset).second)
          out.push_back("two edge ids with the same endpoints");
      }
      break;
    }
    case ClassTag::Hypergraphs:
      break;  // any edge family is fine
    case ClassTag::LaminarHypergraphs: {
      auto edges = detail::hyperedges(a);
      for (auto e : edges)
        if (!e) out.push_back("laminar families contain no empty hyperedge");
      for (size_t i = 0; i < edges.size(); ++i)
        for (size_t j = i + 1; j < edges.size(); ++j) {
          auto meet = edges[i] & edges[j];
          if (meet && meet != edges[i] && meet != edges[j])
            out.push_back("hyperedges must be nested or disjoint");
        }
      break;
    }
    case ClassTag::KUniformHypergraphs:
      for (auto e : detail::hyperedges(a))
        if (popcount(e) != c.param)
          out.push_back("hyperedge of size other than " +
                        std::to_string(c.param));
      break;
    case ClassTag::KAryRelations:
      break;
    case ClassTag::BipartiteGraphs: {
      detail::check_symmetric_irreflexive(a, "edge", out);
      std::vector<bool> left(a.n, false);
      for (const auto& t : a.tuples("left")) left[std::get<int>(t[0])] = true;
      for (const auto& t : a.tuples("edge")) {
        int x = std::get<int>(t[0]), y = std::get<int>(t[1]);
        if (left[x] == left[y])
          out.push_back("edge inside one side of the bipartition");
      }
      break;
    }
    case ClassTag::Matrices: {
      std::set<int> rows, cols;
      std::map<std::pair<int, int>, int> entries;
      for (int v = 0; v < c.param; ++v)
        for (const auto& t : a.tuples("entry" + std::to_string(v))) {
          rows.insert(std::get<int>(t[0]));
          cols.insert(std::get<int>(t[1]));
          entries[{std::get<int>(t[0]), std::get<int>(t[1])}]++;
        }
      if (rows.empty() || cols.empty()) {
        out.push_back("matrix needs at least one row and one column");
        break;
      }
      for (int r : rows)
        if (cols.count(r)) out.push_back("id used both as row and as column");
      if (static_cast<int>(rows.size() + cols.size()) != a.n)
        out.push_back("universe must be exactly rows plus columns");
      for (int r : rows)
        for (int col : cols)
          if (entries[{r, col}] != 1)
            out.push_back("every row/column pair needs exactly one entry");
      break;
    }
    case ClassTag::MatroidIndependence: {
      std::set<std::uint64_t> indep;
      for (const auto& t : a.tuples("indep"))
        indep.insert(set_to_mask(std::get<SetSlot>(t[0])));
      if (!indep.count(0))
        out.push_back("the empty set must be independent");
      for (auto s : indep)
        for (int i = 0; i < a.n; ++i)
          if ((s >> i) & 1)
            if (!indep.count(s & ~(std::uint64_t{1} << i))) {
              out.push_back("independent sets must be downward closed");
              i = a.n;
              s = 0;
            }
      for (auto s : indep)
        for (auto t : indep) {
          if (popcount(s) >= popcount(t)) continue;
          bool found = false;
          for (int i = 0; i < a.n && !found; ++i)
            if (((t >> i) & 1) && !((s >> i) & 1))
              found = indep.count(s | (std::uint64_t{1} << i)) > 0;
          if (!found) {
            out.push_back("exchange axiom fails");
            s = t = 0;
          }
        }
      break;
    }
    case ClassTag::MatroidNull: {
      int q = c.param;
      std::set<gf::Vec> vectors;
      for (const auto& t : a.tuples("null")) {
        auto v = detail::null_tuple_vector(t, a.n);
        if (!v) {
          out.push_back("null tuple with overlapping slots");
          continue;
        }
        vectors.insert(*v);
      }
      if (!out.empty()) break;
      if (!vectors.count(gf::Vec(a.n, 0))) {
        out.push_back("the all-empty null tuple must be present");
        break;
      }
      gf::Mat rows(vectors.begin(), vectors.end());
      int r = gf::rank(rows, q);
      // a set containing 0 whose size equals the size of its span is a space
      BigUint span = BigUint::pow(q, r);
      if (!(span.fits_u64() && span.to_u64() == vectors.size()))
        out.push_back("null vectors must form a linear subspace");
      break;
    }
    case ClassTag::Bool:
      if (a.n != 1) out.push_back("Bool structures have a single element");
      break;
    case ClassTag::Pairs: {
      Structure l, r;
      try {
        l = project_pair(a, true);
        r = project_pair(a, false);
      } catch (const error& e) {
        out.push_back(e.what());
        break;
      }
      for (const auto& v : class_violations(*c.left, l))
        out.push_back("left: " + v);
      for (const auto& v : class_violations(*c.right, r))
        out.push_back("right: " + v);
      break;
    }
  }
  sort_unique(out);
  return out;
}

inline bool is_member(const ClassId& c, const Structure& a) {
  return class_violations(c, a).empty();
}

inline void check_member(const ClassId& c, const Structure& a,
                         const std::string& what) {
  auto errs = class_violations(c, a);
  if (!errs.empty())
    fail(what + ": not in class " + class_name(c) + ": " + errs.front());
}

inline Structure bool_structure(bool v) {
  Structure a = make_structure(vocabulary_of(class_id(ClassTag::Bool)), 1);
  if (v) a.tuples("val").push_back({Slot{0}});
  return a;
}

// Hypergraphs as structures carry one set-kind unary relation; these two
// converters move between that form and plain edge masks.
inline Structure hypergraph_structure(int n, std::vector<std::uint64_t> edges) {
  Structure a =
      make_structure(vocabulary_of(class_id(ClassTag::Hypergraphs)), n);
  sort_unique(edges);
  for (auto e : edges) a.tuples("edge").push_back({Slot{mask_to_set(e)}});
  a.normalize();
  return a;
}

inline std::vector<std::uint64_t> hypergraph_masks(const Structure& a) {
  auto out = detail::hyperedges(a);
  sort_unique(out);
  return out;
}

}  // namespace mso
