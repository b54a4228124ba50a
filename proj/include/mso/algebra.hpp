#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mso/common.hpp"
#include "mso/enumerate.hpp"
#include "mso/gf.hpp"
#include "mso/logic.hpp"
#include "mso/matroid.hpp"
#include "mso/transduction.hpp"

namespace mso {

// ---------------------------------------------------------------------------
// Ported matroids and branch terms

struct PortedMatroid {
  RepresentedMatroid matroid;
  std::vector<int> ports;  // element indices; repeats allowed
};

inline void check_ported(const PortedMatroid& p) {
  check_represented(p.matroid);
  for (int e : p.ports)
    require(0 <= e && e < p.matroid.n(), "port out of range");
}

inline Json ported_to_json(const PortedMatroid& p) {
  Json j;
  j["matroid"] = represented_to_json(p.matroid);
  j["ports"] = p.ports;
  return j;
}

inline PortedMatroid ported_from_json(const Json& j) {
  require(j.is_object() && j.contains("matroid") && j.contains("ports") &&
              j["ports"].is_array(),
          "ported matroid needs matroid and ports");
  PortedMatroid p{represented_from_json(j["matroid"]), {}};
  for (const auto& e : j["ports"]) {
    require(e.is_number_integer(), "ports must be element indices");
    p.ports.push_back(e);
  }
  check_ported(p);
  return p;
}

struct BranchTerm;
using BranchTermPtr = std::shared_ptr<const BranchTerm>;

// Term over the branchwidth algebra: constants carry ported matroids, renames
// re-index ports (entry i names the child port the i-th output port copies),
// quotients identify a port combination with zero, unions are disjoint.
struct BranchTerm {
  enum class Op { Constant, Rename, Quotient, Union };
  Op op = Op::Constant;
  PortedMatroid constant;
  std::vector<int> map;           // Rename
  std::vector<int> coefficients;  // Quotient, one per child port
  BranchTermPtr left;             // only child of Rename/Quotient
  BranchTermPtr right;
};

inline BranchTermPtr constant_term(PortedMatroid m) {
  auto t = std::make_shared<BranchTerm>();
  t->op = BranchTerm::Op::Constant;
  t->constant = std::move(m);
  return t;
}

inline BranchTermPtr rename_term(std::vector<int> map, BranchTermPtr child) {
  auto t = std::make_shared<BranchTerm>();
  t->op = BranchTerm::Op::Rename;
  t->map = std::move(map);
  t->left = std::move(child);
  return t;
}

inline BranchTermPtr quotient_term(std::vector<int> coefficients, BranchTermPtr child) {
  auto t = std::make_shared<BranchTerm>();
  t->op = BranchTerm::Op::Quotient;
  t->coefficients = std::move(coefficients);
  t->left = std::move(child);
  return t;
}

inline BranchTermPtr union_term(BranchTermPtr left, BranchTermPtr right) {
  auto t = std::make_shared<BranchTerm>();
  t->op = BranchTerm::Op::Union;
  t->left = std::move(left);
  t->right = std::move(right);
  return t;
}

struct TermShape {
  int q = 0;
  int sort = 0;  // number of ports of the value
};

inline TermShape check_term(const BranchTermPtr& t) {
  require(t != nullptr, "missing term");
  switch (t->op) {
    case BranchTerm::Op::Constant: {
      check_ported(t->constant);
      return {t->constant.matroid.q, static_cast<int>(t->constant.ports.size())};
    }
    case BranchTerm::Op::Rename: {
      TermShape child = check_term(t->left);
      for (int i : t->map)
        require(0 <= i && i < child.sort, "rename map refers to a missing port");
      return {child.q, static_cast<int>(t->map.size())};
    }
    case BranchTerm::Op::Quotient: {
      TermShape child = check_term(t->left);
      require(static_cast<int>(t->coefficients.size()) == child.sort,
              "quotient needs one coefficient per port");
      for (int c : t->coefficients)
        require(0 <= c && c < child.q, "quotient coefficient outside the field");
      return child;
    }
    case BranchTerm::Op::Union: {
      TermShape l = check_term(t->left);
      TermShape r = check_term(t->right);
      require(l.q == r.q, "union mixes different fields");
      return {l.q, l.sort + r.sort};
    }
  }
  fail("unreachable term op");
}

namespace detail {

inline PortedMatroid eval_rec(const BranchTermPtr& t) {
  switch (t->op) {
    case BranchTerm::Op::Constant:
      return t->constant;
    case BranchTerm::Op::Rename: {
      PortedMatroid child = eval_rec(t->left);
      std::vector<int> ports;
      for (int i : t->map) ports.push_back(child.ports[i]);
      child.ports = std::move(ports);
      return child;
    }
    case BranchTerm::Op::Quotient: {
      PortedMatroid child = eval_rec(t->left);
      int q = child.matroid.q;
      int d = child.matroid.d;
      gf::Vec u(d, 0);
      for (size_t i = 0; i < t->coefficients.size(); ++i) {
        const gf::Vec& v = child.matroid.vectors[child.ports[i]];
        for (int c = 0; c < d; ++c)
          u[c] = gf::add(u[c], gf::mul(t->coefficients[i], v[c], q), q);
      }
      int pivot = -1;
      for (int c = 0; c < d; ++c)
        if (u[c] != 0) {
          pivot = c;
          break;
        }
      if (pivot < 0) return child;  // quotient by the zero vector
      int scale = gf::inv(u[pivot], q);
      for (int c = 0; c < d; ++c) u[c] = gf::mul(u[c], scale, q);
      // Project along u onto the remaining coordinates; a 0-dimensional
      // quotient keeps one all-zero coordinate so d stays positive.
      for (auto& w : child.matroid.vectors) {
        int c0 = w[pivot];
        for (int c = 0; c < d; ++c) w[c] = gf::sub(w[c], gf::mul(c0, u[c], q), q);
        w.erase(w.begin() + pivot);
        if (w.empty()) w.push_back(0);
      }
      child.matroid.d = std::max(d - 1, 1);
      return child;
    }
    case BranchTerm::Op::Union: {
      PortedMatroid l = eval_rec(t->left);
      PortedMatroid r = eval_rec(t->right);
      PortedMatroid out;
      out.matroid.q = l.matroid.q;
      out.matroid.d = l.matroid.d + r.matroid.d;
      for (const auto& v : l.matroid.vectors) {
        gf::Vec w = v;
        w.resize(out.matroid.d, 0);
        out.matroid.vectors.push_back(std::move(w));
      }
      for (const auto& v : r.matroid.vectors) {
        gf::Vec w(l.matroid.d, 0);
        w.insert(w.end(), v.begin(), v.end());
        out.matroid.vectors.push_back(std::move(w));
      }
      out.ports = l.ports;
      for (int p : r.ports) out.ports.push_back(p + l.matroid.n());
      return out;
    }
  }
  fail("unreachable term op");
}

}  // namespace detail

inline PortedMatroid eval_term(const BranchTermPtr& t) {
  check_term(t);
  return detail::eval_rec(t);
}

inline Json term_to_json(const BranchTermPtr& t) {
  require(t != nullptr, "missing term");
  Json j;
  switch (t->op) {
    case BranchTerm::Op::Constant:
      j["op"] = "constant";
      j["matroid"] = represented_to_json(t->constant.matroid);
      j["ports"] = t->constant.ports;
      break;
    case BranchTerm::Op::Rename:
      j["op"] = "rename";
      j["map"] = t->map;
      j["child"] = term_to_json(t->left);
      break;
    case BranchTerm::Op::Quotient:
      j["op"] = "quotient";
      j["coefficients"] = t->coefficients;
      j["child"] = term_to_json(t->left);
      break;
    case BranchTerm::Op::Union:
      j["op"] = "union";
      j["left"] = term_to_json(t->left);
      j["right"] = term_to_json(t->right);
      break;
  }
  return j;
}

namespace detail {

inline BranchTermPtr term_from_json_rec(const Json& j) {
  require(j.is_object() && j.contains("op") && j["op"].is_string(),
          "term node needs an op");
  std::string op = j["op"];
  auto ints = [&](const char* key) {
    require(j.contains(key) && j[key].is_array(), std::string("term node needs ") + key);
    std::vector<int> out;
    for (const auto& e : j[key]) {
      require(e.is_number_integer(), std::string(key) + " must hold integers");
      out.push_back(e);
    }
    return out;
  };
  if (op == "constant") {
    PortedMatroid p{represented_from_json(j.at("matroid")), ints("ports")};
    return constant_term(std::move(p));
  }
  if (op == "rename")
    return rename_term(ints("map"), term_from_json_rec(j.at("child")));
  if (op == "quotient")
    return quotient_term(ints("coefficients"), term_from_json_rec(j.at("child")));
  if (op == "union")
    return union_term(term_from_json_rec(j.at("left")),
                      term_from_json_rec(j.at("right")));
  fail("unknown term op: " + op);
}

}  // namespace detail

inline BranchTermPtr term_from_json(const Json& j) {
  BranchTermPtr t = detail::term_from_json_rec(j);
  check_term(t);
  return t;
}

// ---------------------------------------------------------------------------
// Compiling a branch decomposition into a term
//
// Every leaf contributes a fresh one-element constant; unions stack subtrees
// and quotients impose, per node, the linear dependencies of the matroid that
// first become internal there.  Ports carry exactly the elements that some
// ancestor dependency still mentions, so the root renames to no ports at all.

struct TermPortReport {
  int max_ports = 0;
  int max_connectivity = 0;
  std::vector<std::pair<int, int>> per_node;  // (cut connectivity, port count)
};

namespace detail {

struct TermNode {
  int left = -1;
  int right = -1;
  int vertex = -1;
  std::uint64_t mask = 0;
  std::vector<int> order;        // subtree elements in leaf order
  gf::Mat deps;                  // basis of dependencies internal to the subtree
  std::vector<gf::Vec> fresh;    // dependencies first imposed at this node
  std::vector<int> ported;       // elements kept as ports, ascending
};

// Reduces w against rows in reduced echelon form with the given pivots.
inline gf::Vec reduce_row(const gf::Mat& rows, const std::vector<int>& pivots,
                          gf::Vec w, int q) {
  for (size_t k = 0; k < rows.size(); ++k) {
    int c = w[pivots[k]];
    if (c == 0) continue;
    for (size_t j = 0; j < w.size(); ++j)
      w[j] = gf::sub(w[j], gf::mul(c, rows[k][j], q), q);
  }
  return w;
}

struct TermBuild {
  BranchTermPtr term;
  TermPortReport report;
  std::vector<int> order;  // term element i corresponds to matroid element order[i]
};

inline TermBuild build_term(const RepresentedMatroid& m, const BranchDecomposition& t) {
  check_represented(m);
  check_decomposition(t);
  require(t.leaves == m.n(), "decomposition leaves must match the elements");
  int n = m.n();
  int q = m.q;

  std::vector<TermNode> nodes;
  if (n == 1) {
    nodes.push_back({-1, -1, 0, 1, {0}, {}, {}, {}});
  } else {
    int count = 2 * n - 2;
    std::vector<std::vector<int>> adj(count);
    for (auto [u, v] : t.edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    int root_edge = -1;
    int best_larger = 0;
    std::pair<int, int> best_pair;
    for (size_t i = 0; i < t.edges.size(); ++i) {
      std::uint64_t side = leaf_side(t, i, true);
      int larger = std::max(popcount(side), n - popcount(side));
      std::pair<int, int> pair = std::minmax(t.edges[i].first, t.edges[i].second);
      if (root_edge == -1 || larger < best_larger ||
          (larger == best_larger && pair < best_pair)) {
        root_edge = static_cast<int>(i);
        best_larger = larger;
        best_pair = pair;
      }
    }
    auto build = [&](auto&& self, int w, int parent) -> int {
      int id = static_cast<int>(nodes.size());
      nodes.push_back({});
      if (w < n) {
        nodes[id].vertex = w;
        nodes[id].mask = std::uint64_t{1} << w;
        nodes[id].order = {w};
        return id;
      }
      std::vector<int> kids;
      for (int nb : adj[w])
        if (nb != parent) kids.push_back(nb);
      std::sort(kids.begin(), kids.end());
      int left = self(self, kids[0], w);
      int right = self(self, kids[1], w);
      nodes[id].left = left;
      nodes[id].right = right;
      nodes[id].mask = nodes[left].mask | nodes[right].mask;
      nodes[id].order = nodes[left].order;
      nodes[id].order.insert(nodes[id].order.end(), nodes[right].order.begin(),
                             nodes[right].order.end());
      return id;
    };
    auto [u, v] = t.edges[root_edge];
    nodes.push_back({});
    nodes[0].left = build(build, std::min(u, v), std::max(u, v));
    nodes[0].right = build(build, std::max(u, v), std::min(u, v));
    nodes[0].mask = (std::uint64_t{1} << n) - 1;
    nodes[0].order = nodes[nodes[0].left].order;
    nodes[0].order.insert(nodes[0].order.end(), nodes[nodes[0].right].order.begin(),
                          nodes[nodes[0].right].order.end());
  }

  // Dependencies of the subtree at each node: start from the children's bases
  // and extend to the null space of the subtree's vectors, recording the
  // reduced new rows.  Vectors live on full element coordinates.
  auto fill_deps = [&](auto&& self, int id) -> void {
    TermNode& node = nodes[id];
    if (node.left >= 0) {
      self(self, node.left);
      self(self, node.right);
    }
    gf::Mat echelon;
    if (node.left >= 0) {
      for (const auto& row : nodes[node.left].deps) echelon.push_back(row);
      for (const auto& row : nodes[node.right].deps) echelon.push_back(row);
    }
    std::vector<int> pivots = gf::rref(echelon, q);
    gf::Mat local;
    for (int e : node.order) local.push_back(m.vectors[e]);
    for (const auto& combo : gf::null_combinations(local, q)) {
      gf::Vec full(n, 0);
      for (size_t i = 0; i < combo.size(); ++i) full[node.order[i]] = combo[i];
      gf::Vec reduced = detail::reduce_row(echelon, pivots, full, q);
      if (std::all_of(reduced.begin(), reduced.end(), [](int c) { return c == 0; }))
        continue;
      node.fresh.push_back(reduced);
      echelon.push_back(reduced);
      pivots = gf::rref(echelon, q);
    }
    node.deps = echelon;
  };
  fill_deps(fill_deps, 0);

  // Ports: elements still mentioned by a dependency imposed above the node.
  auto fill_ports = [&](auto&& self, int id, std::vector<bool> needed) -> void {
    TermNode& node = nodes[id];
    for (int e = 0; e < n; ++e)
      if (needed[e] && (node.mask >> e & 1)) node.ported.push_back(e);
    if (node.left < 0) return;
    for (const auto& row : node.fresh)
      for (int e = 0; e < n; ++e)
        if (row[e] != 0) needed[e] = true;
    self(self, node.left, needed);
    self(self, node.right, needed);
  };
  fill_ports(fill_ports, 0, std::vector<bool>(n, false));

  TermBuild out;
  std::uint64_t full = (std::uint64_t{1} << n) - 1;
  auto emit = [&](auto&& self, int id) -> BranchTermPtr {
    const TermNode& node = nodes[id];
    int conn = node.mask == full
                   ? 0
                   : rank(m, node.mask) + rank(m, full & ~node.mask) - rank(m, full);
    out.report.per_node.push_back({conn, static_cast<int>(node.ported.size())});
    out.report.max_ports = std::max(out.report.max_ports,
                                    static_cast<int>(node.ported.size()));
    out.report.max_connectivity = std::max(out.report.max_connectivity, conn);
    if (node.left < 0) {
      int e = node.vertex;
      bool loop = std::all_of(m.vectors[e].begin(), m.vectors[e].end(),
                              [](int c) { return c == 0; });
      PortedMatroid constant{{q, 1, {gf::Vec{loop ? std::uint8_t{0} : std::uint8_t{1}}}},
                             {}};
      if (!node.ported.empty()) constant.ports = {0};
      return constant_term(std::move(constant));
    }
    BranchTermPtr term = union_term(self(self, node.left), self(self, node.right));
    // Port slots after the union: left's ported elements then right's.
    std::vector<int> slots = nodes[node.left].ported;
    slots.insert(slots.end(), nodes[node.right].ported.begin(),
                 nodes[node.right].ported.end());
    for (const auto& row : node.fresh) {
      std::vector<int> coefficients;
      for (int e : slots) coefficients.push_back(row[e]);
      for (int e = 0; e < n; ++e)
        if (row[e] != 0)
          require(std::find(slots.begin(), slots.end(), e) != slots.end(),
                  "dependency mentions an unported element");
      term = quotient_term(std::move(coefficients), std::move(term));
    }
    std::vector<int> map;
    for (int e : node.ported) {
      auto it = std::find(slots.begin(), slots.end(), e);
      map.push_back(static_cast<int>(it - slots.begin()));
    }
    return rename_term(std::move(map), std::move(term));
  };
  out.term = emit(emit, 0);
  out.order = nodes[0].order;
  return out;
}

}  // namespace detail

inline BranchTermPtr term_from_branch_decomposition(const RepresentedMatroid& m,
                                                    const BranchDecomposition& t) {
  return detail::build_term(m, t).term;
}

// Observed port counts next to the cut connectivities; the bound is reported,
// not asserted.
inline TermPortReport term_port_report(const RepresentedMatroid& m,
                                       const BranchDecomposition& t) {
  return detail::build_term(m, t).report;
}

// Leaf order of the compiled term: term element i is matroid element
// term_element_order(m, t)[i].
inline std::vector<int> term_element_order(const RepresentedMatroid& m,
                                           const BranchDecomposition& t) {
  return detail::build_term(m, t).order;
}

// ---------------------------------------------------------------------------
// Finite monoids

struct FiniteMonoid {
  std::vector<std::vector<int>> table;
  int unit = 0;

  int size() const { return static_cast<int>(table.size()); }
  int mul(int a, int b) const { return table[a][b]; }
};

inline void check_monoid(const FiniteMonoid& m) {
  int size = m.size();
  require(size >= 1, "monoid needs at least one element");
  for (const auto& row : m.table) {
    require(static_cast<int>(row.size()) == size, "multiplication table must be square");
    for (int e : row) require(0 <= e && e < size, "table entry out of range");
  }
  require(0 <= m.unit && m.unit < size, "unit out of range");
  for (int a = 0; a < size; ++a)
    require(m.mul(m.unit, a) == a && m.mul(a, m.unit) == a, "unit laws fail");
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b)
      for (int c = 0; c < size; ++c)
        require(m.mul(m.mul(a, b), c) == m.mul(a, m.mul(b, c)),
                "multiplication is not associative");
}

inline Json monoid_to_json(const FiniteMonoid& m) {
  Json j;
  j["table"] = m.table;
  j["unit"] = m.unit;
  return j;
}

inline FiniteMonoid monoid_from_json(const Json& j) {
  require(j.is_object() && j.contains("table") && j.contains("unit") &&
              j["table"].is_array() && j["unit"].is_number_integer(),
          "monoid needs table and unit");
  FiniteMonoid m;
  m.unit = j["unit"];
  for (const auto& row : j["table"]) {
    require(row.is_array(), "table rows must be arrays");
    std::vector<int> out;
    for (const auto& e : row) {
      require(e.is_number_integer(), "table entries must be integers");
      out.push_back(e);
    }
    m.table.push_back(out);
  }
  check_monoid(m);
  return m;
}

inline std::vector<int> idempotents(const FiniteMonoid& m) {
  std::vector<int> out;
  for (int e = 0; e < m.size(); ++e)
    if (m.mul(e, e) == e) out.push_back(e);
  return out;
}

struct Homomorphism {
  FiniteMonoid monoid;
  std::map<char, int> letters;
};

inline void check_homomorphism(const Homomorphism& h) {
  check_monoid(h.monoid);
  for (auto [c, e] : h.letters)
    require(0 <= e && e < h.monoid.size(), "letter image out of range");
}

inline Json homomorphism_to_json(const Homomorphism& h) {
  Json j;
  j["monoid"] = monoid_to_json(h.monoid);
  j["letters"] = Json::object();
  for (auto [c, e] : h.letters) j["letters"][std::string(1, c)] = e;
  return j;
}

inline Homomorphism homomorphism_from_json(const Json& j) {
  require(j.is_object() && j.contains("monoid") && j.contains("letters") &&
              j["letters"].is_object(),
          "homomorphism needs monoid and letters");
  Homomorphism h{monoid_from_json(j["monoid"]), {}};
  for (const auto& [key, value] : j["letters"].items()) {
    require(key.size() == 1, "letters must be single characters");
    require(value.is_number_integer(), "letter images must be integers");
    h.letters[key[0]] = value;
  }
  check_homomorphism(h);
  return h;
}

inline int letter_image(const Homomorphism& h, char c) {
  auto it = h.letters.find(c);
  require(it != h.letters.end(), std::string("unmapped letter: ") + c);
  return it->second;
}

inline int word_image(const Homomorphism& h, const std::string& w) {
  int out = h.monoid.unit;
  for (char c : w) out = h.monoid.mul(out, letter_image(h, c));
  return out;
}

// ---------------------------------------------------------------------------
// Factorization trees

struct FactorizationTree {
  int element = 0;
  std::vector<FactorizationTree> children;
};

inline int tree_height(const FactorizationTree& t) {
  int best = -1;
  for (const auto& c : t.children) best = std::max(best, tree_height(c));
  return best + 1;
}

inline std::vector<int> tree_yield(const FactorizationTree& t) {
  if (t.children.empty()) return {t.element};
  std::vector<int> out;
  for (const auto& c : t.children) {
    std::vector<int> sub = tree_yield(c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

// Nodes multiply out their children; wider nodes must repeat one idempotent.
inline void check_factorization(const FiniteMonoid& m, const FactorizationTree& t) {
  require(0 <= t.element && t.element < m.size(), "tree element out of range");
  if (t.children.empty()) return;
  require(t.children.size() >= 2, "internal nodes need at least two children");
  for (const auto& c : t.children) check_factorization(m, c);
  int product = m.unit;
  for (const auto& c : t.children) product = m.mul(product, c.element);
  require(product == t.element, "node label must be the product of its children");
  if (t.children.size() >= 3) {
    for (const auto& c : t.children)
      require(c.element == t.element, "wide nodes need equal child labels");
    require(m.mul(t.element, t.element) == t.element,
            "wide nodes need an idempotent label");
  }
}

inline Json factorization_to_json(const FactorizationTree& t) {
  Json j;
  j["element"] = t.element;
  j["children"] = Json::array();
  for (const auto& c : t.children) j["children"].push_back(factorization_to_json(c));
  return j;
}

inline FactorizationTree factorization_from_json(const Json& j) {
  require(j.is_object() && j.contains("element") && j.contains("children") &&
              j["element"].is_number_integer() && j["children"].is_array(),
          "factorization node needs element and children");
  FactorizationTree t;
  t.element = j["element"];
  for (const auto& c : j["children"])
    t.children.push_back(factorization_from_json(c));
  return t;
}

namespace detail {

// Interval tables for minimum-height factorization trees.  flat[l][e][i][j]
// is the smallest possible maximum height over splits of positions [i, j)
// into at least l+1 blocks that each multiply out to the idempotent e.
struct FactorizationTables {
  std::vector<int> letters;
  std::vector<std::vector<int>> image;   // image[i][j], j > i
  std::vector<std::vector<int>> height;  // optimal tree height per interval
  std::vector<std::array<std::vector<std::vector<int>>, 3>> flat;  // by idempotent
  std::vector<int> idempotent_index;     // element -> slot in flat, or -1
};

inline FactorizationTree rebuild_tree(const FiniteMonoid& m,
                                      const FactorizationTables& tables, int i,
                                      int j);

// Emits, left to right, a split of [i, j) into at least level+1 blocks of
// image e whose subtree heights stay within bound.
inline void rebuild_blocks(const FiniteMonoid& m, const FactorizationTables& tables,
                           int level, int e, int i, int j, int bound,
                           std::vector<FactorizationTree>& out) {
  const auto& flat = tables.flat[tables.idempotent_index[e]];
  if (level == 0 && tables.image[i][j] == e && tables.height[i][j] <= bound) {
    out.push_back(rebuild_tree(m, tables, i, j));
    return;
  }
  int lower = level == 0 ? 0 : level - 1;
  for (int k = i + 1; k < j; ++k)
    if (tables.image[k][j] == e && tables.height[k][j] <= bound &&
        flat[lower][i][k] <= bound) {
      rebuild_blocks(m, tables, lower, e, i, k, bound, out);
      out.push_back(rebuild_tree(m, tables, k, j));
      return;
    }
  fail("factorization tables are inconsistent");
}

inline FactorizationTree rebuild_tree(const FiniteMonoid& m,
                                      const FactorizationTables& tables, int i,
                                      int j) {
  if (j - i == 1) return {tables.letters[i], {}};
  int e = tables.image[i][j];
  int best = tables.height[i][j];
  int slot = tables.idempotent_index[e];
  if (slot >= 0 && tables.flat[slot][2][i][j] + 1 == best) {
    FactorizationTree node{e, {}};
    rebuild_blocks(m, tables, 2, e, i, j, best - 1, node.children);
    return node;
  }
  for (int k = i + 1; k < j; ++k)
    if (1 + std::max(tables.height[i][k], tables.height[k][j]) == best)
      return {e, {rebuild_tree(m, tables, i, k), rebuild_tree(m, tables, k, j)}};
  fail("factorization tables are inconsistent");
}

}  // namespace detail

// Interval dynamic program returning a minimum-height valid tree; by the
// factorization forest theorem the optimum stays within 3 times the monoid
// size.  Binary splits are always allowed, wider nodes only for runs of
// blocks that multiply out to one idempotent.
inline FactorizationTree factorization_tree(const Homomorphism& h,
                                            const std::string& w) {
  check_homomorphism(h);
  require(!w.empty(), "cannot factorize the empty word");
  int n = static_cast<int>(w.size());
  require(n <= 400, "factorization supports words up to 400 letters");
  const FiniteMonoid& m = h.monoid;

  detail::FactorizationTables tables;
  for (char c : w) tables.letters.push_back(letter_image(h, c));
  tables.image.assign(n + 1, std::vector<int>(n + 1, 0));
  for (int i = 0; i < n; ++i) {
    int acc = m.unit;
    for (int j = i + 1; j <= n; ++j) {
      acc = m.mul(acc, tables.letters[j - 1]);
      tables.image[i][j] = acc;
    }
  }
  tables.idempotent_index.assign(m.size(), -1);
  const int kInf = 1 << 29;
  for (int e : idempotents(m)) {
    tables.idempotent_index[e] = static_cast<int>(tables.flat.size());
    tables.flat.push_back({});
    for (auto& level : tables.flat.back())
      level.assign(n + 1, std::vector<int>(n + 1, kInf));
  }
  tables.height.assign(n + 1, std::vector<int>(n + 1, kInf));

  for (int len = 1; len <= n; ++len)
    for (int i = 0; i + len <= n; ++i) {
      int j = i + len;
      int& best = tables.height[i][j];
      if (len == 1) {
        best = 0;
      } else {
        for (int k = i + 1; k < j; ++k)
          best = std::min(best,
                          1 + std::max(tables.height[i][k], tables.height[k][j]));
      }
      for (int e : idempotents(m)) {
        auto& flat = tables.flat[tables.idempotent_index[e]];
        for (int level = 1; level < 3; ++level)
          for (int k = i + 1; k < j; ++k)
            if (tables.image[k][j] == e)
              flat[level][i][j] =
                  std::min(flat[level][i][j], std::max(flat[level - 1][i][k],
                                                       tables.height[k][j]));
        if (e == tables.image[i][j] && flat[2][i][j] < kInf)
          best = std::min(best, 1 + flat[2][i][j]);
        // The one-block entry feeds wider intervals, so it uses the final
        // height and is written last.
        flat[0][i][j] = tables.image[i][j] == e ? best : kInf;
        for (int k = i + 1; k < j; ++k)
          if (tables.image[k][j] == e)
            flat[0][i][j] = std::min(
                flat[0][i][j], std::max(flat[0][i][k], tables.height[k][j]));
      }
    }

  return detail::rebuild_tree(m, tables, 0, n);
}

// Closure of random generators inside the transformation monoid on 3 points;
// retries until the closure fits the requested size.
inline FiniteMonoid random_transformation_monoid(Rng& rng, int max_size = 6) {
  require(max_size >= 1, "monoid size bound must be positive");
  std::uniform_int_distribution<int> point(0, 2);
  std::uniform_int_distribution<int> count(1, 2);
  while (true) {
    std::vector<std::array<int, 3>> fns{{0, 1, 2}};
    int generators = count(rng);
    for (int g = 0; g < generators; ++g) {
      std::array<int, 3> f{point(rng), point(rng), point(rng)};
      if (std::find(fns.begin(), fns.end(), f) == fns.end()) fns.push_back(f);
    }
    for (size_t done = 1; done < fns.size() && fns.size() <= 27; ++done)
      for (size_t other = 1; other < fns.size() && fns.size() <= 27; ++other)
        for (auto [a, b] : {std::pair{done, other}, std::pair{other, done}}) {
          std::array<int, 3> f;
          for (int x = 0; x < 3; ++x) f[x] = fns[b][fns[a][x]];
          if (std::find(fns.begin(), fns.end(), f) == fns.end()) fns.push_back(f);
        }
    if (static_cast<int>(fns.size()) > max_size) continue;
    std::sort(fns.begin() + 1, fns.end());
    FiniteMonoid m;
    m.unit = 0;
    m.table.assign(fns.size(), std::vector<int>(fns.size(), 0));
    for (size_t a = 0; a < fns.size(); ++a)
      for (size_t b = 0; b < fns.size(); ++b) {
        std::array<int, 3> f;
        for (int x = 0; x < 3; ++x) f[x] = fns[b][fns[a][x]];
        auto it = std::find(fns.begin(), fns.end(), f);
        m.table[a][b] = static_cast<int>(it - fns.begin());
      }
    check_monoid(m);
    return m;
  }
}

// ---------------------------------------------------------------------------
// Recognizability probe
//
// Tabulates the composed language over every structure of the transduction's
// input class up to the size bound; with an MSO sentence the table is checked
// against evaluating the sentence directly on each pipeline output.

struct ProbeReport {
  int structures = 0;
  std::vector<bool> table;  // composed predicate, enumeration order by size
  int disagreements = 0;
  int first_disagreement = -1;
};

inline ProbeReport recognizability_probe(const Transduction& t,
                                         const StructurePredicate& lang,
                                         int max_size,
                                         const Budget& budget = default_budget()) {
  validate_transduction(t);
  require(t.input.has_value(), "probe needs a transduction with a named input class");
  require(1 <= max_size && max_size <= 8, "probe corpus bound must be 1..8");
  StructurePredicate composed = language_compose(t, lang, budget);
  ProbeReport report;
  for (int size = 1; size <= max_size; ++size)
    for (const Structure& a : enumerate_exact(*t.input, size)) {
      ++report.structures;
      report.table.push_back(composed(a));
    }
  return report;
}

inline ProbeReport recognizability_probe(const Transduction& t,
                                         const FormulaPtr& sentence, int max_size,
                                         const Budget& budget = default_budget()) {
  require(sentence != nullptr, "probe needs a sentence");
  StructurePredicate lang = [&sentence, budget](const Structure& b) {
    return holds(b, *sentence, budget);
  };
  ProbeReport report = recognizability_probe(t, lang, max_size, budget);
  int index = 0;
  for (int size = 1; size <= max_size; ++size)
    for (const Structure& a : enumerate_exact(*t.input, size)) {
      bool direct = false;
      for (const auto& triple : apply(t, a, budget))
        if (holds(triple.output, *sentence, budget)) direct = true;
      if (direct != static_cast<bool>(report.table[index])) {
        ++report.disagreements;
        if (report.first_disagreement < 0) report.first_disagreement = index;
      }
      ++index;
    }
  return report;
}

}  // namespace mso
