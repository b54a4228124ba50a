#pragma once

// Command-line wiring: every subcommand reads files, calls exactly one
// library operation, and prints one JSON document (or DOT text under --dot)
// on standard output.  Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mso/algebra.hpp"
#include "mso/classes.hpp"
#include "mso/common.hpp"
#include "mso/encodings.hpp"
#include "mso/enumerate.hpp"
#include "mso/logic.hpp"
#include "mso/matroid.hpp"
#include "mso/structures.hpp"
#include "mso/transduction.hpp"
#include "mso/width.hpp"

namespace mso {

// One row per leaf subcommand; `operation` names the library call it wraps.
struct CommandInfo {
  std::string path;       // e.g. "matroid branchwidth"
  std::string operation;  // e.g. "branchwidth"
};

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json load_json(const std::string& path) {
  Json j = Json::parse(slurp(path), nullptr, false);
  require(!j.is_discarded(), "file is not valid JSON: " + path);
  return j;
}

// Inverse of class_name: Tag, Tag(k), or Pairs(Left,Right) with nesting.
inline ClassId class_from_name(const std::string& text) {
  std::size_t pos = 0;
  auto parse = [&](auto&& self) -> ClassId {
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) != 0))
      ++pos;
    std::string head = text.substr(start, pos - start);
    if (head == "Pairs") {
      require(pos < text.size() && text[pos] == '(', "Pairs needs (Left,Right)");
      ++pos;
      ClassId left = self(self);
      require(pos < text.size() && text[pos] == ',', "Pairs needs two classes");
      ++pos;
      ClassId right = self(self);
      require(pos < text.size() && text[pos] == ')', "unclosed Pairs class");
      ++pos;
      return pairs_class(left, right);
    }
    for (const auto& info : tag_table()) {
      if (head != info.name) continue;
      Json j{{"tag", info.name}};
      if (info.param) {
        require(pos < text.size() && text[pos] == '(',
                std::string(info.name) + " needs parameter " + info.param);
        ++pos;
        std::size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          ++pos;
        require(pos > digits && pos < text.size() && text[pos] == ')',
                std::string(info.name) + " needs a numeric parameter");
        j[info.param] = std::stoi(text.substr(digits, pos - digits));
        ++pos;
      }
      return class_from_json(j);
    }
    fail("unknown structure class: " + (head.empty() ? text : head));
  };
  ClassId c = parse(parse);
  require(pos == text.size(), "trailing characters after class name: " + text);
  return c;
}

// Exact catalog id, or a unique prefix of one.
inline const CatalogEntry& entry_by_prefix(const std::string& id) {
  for (const auto& e : encoding_catalog())
    if (e.id == id) return e;
  const CatalogEntry* hit = nullptr;
  for (const auto& e : encoding_catalog())
    if (e.id.rfind(id, 0) == 0) {
      require(hit == nullptr, "encoding id prefix is ambiguous: " + id);
      hit = &e;
    }
  require(hit != nullptr, "unknown encoding id: " + id);
  return *hit;
}

inline std::string decomposition_dot(const BranchDecomposition& b,
                                     const std::vector<int>& leaf_labels) {
  std::ostringstream out;
  out << "graph decomposition {\n";
  int nodes = b.leaves == 1 ? 1 : 2 * b.leaves - 2;
  for (int v = 0; v < nodes; ++v) {
    if (v < b.leaves)
      out << "  n" << v << " [shape=box,label=\"" << leaf_labels[v] << "\"];\n";
    else
      out << "  n" << v << " [shape=point];\n";
  }
  for (auto [x, y] : b.edges) out << "  n" << x << " -- n" << y << ";\n";
  out << "}\n";
  return out.str();
}

inline void factorization_dot_rec(const FactorizationTree& t, int& next,
                                  std::ostringstream& out) {
  int id = next++;
  out << "  n" << id << " [label=\"" << t.element << "\"";
  if (t.children.empty()) out << ",shape=box";
  out << "];\n";
  for (const auto& c : t.children) {
    int child = next;
    factorization_dot_rec(c, next, out);
    out << "  n" << id << " -> n" << child << ";\n";
  }
}

inline std::string factorization_dot(const FactorizationTree& t) {
  std::ostringstream out;
  out << "digraph factorization {\n";
  int next = 0;
  factorization_dot_rec(t, next, out);
  out << "}\n";
  return out.str();
}

struct CliContext {
  std::ostream* out = nullptr;
  bool pretty = false;
  int seed = 0;  // reserved for randomized corpora; all current ops are deterministic
  Budget budget = default_budget();

  void emit(const Json& j) const { *out << (pretty ? j.dump(2) : j.dump()) << "\n"; }
  void text(const std::string& s) const { *out << s; }
};

struct CliBuilder {
  CLI::App* root;
  CliContext* ctx;
  std::vector<CommandInfo>* table;
  std::map<std::string, CLI::App*> groups;

  CLI::App* group(const std::string& name, const std::string& what) {
    auto it = groups.find(name);
    if (it != groups.end()) return it->second;
    CLI::App* g = root->add_subcommand(name, what);
    g->require_subcommand(1);
    g->fallthrough();  // global flags may follow the subcommand
    return groups.emplace(name, g).first->second;
  }

  CLI::App* leaf(const std::string& group_name, const std::string& group_what,
                 const std::string& name, const std::string& operation,
                 const std::string& what) {
    table->push_back({group_name + " " + name, operation});
    CLI::App* c = group(group_name, group_what)->add_subcommand(name, what);
    c->fallthrough();
    return c;
  }
};

inline void register_commands(CliBuilder& b) {
  CliContext* ctx = b.ctx;

  // --- struct ------------------------------------------------------------
  {
    auto* c = b.leaf("struct", "Relational structures", "validate", "check_member",
                     "Validate a structure file, optionally against a class");
    auto file = std::make_shared<std::string>();
    auto cls = std::make_shared<std::string>();
    c->add_option("file", *file, "structure JSON")->required();
    c->add_option("--class", *cls, "class name such as Strings(4)");
    c->callback([ctx, file, cls] {
      Structure a = structure_from_json(load_json(*file));
      Json j{{"ok", true}, {"universe", a.n}};
      if (!cls->empty()) {
        ClassId id = class_from_name(*cls);
        check_member(id, a, "structure");
        j["class"] = class_name(id);
      }
      ctx->emit(j);
    });
  }
  {
    auto* c = b.leaf("struct", "", "iso", "isomorphic",
                     "Decide isomorphism of two structures");
    auto fa = std::make_shared<std::string>(), fb = std::make_shared<std::string>();
    c->add_option("first", *fa, "structure JSON")->required();
    c->add_option("second", *fb, "structure JSON")->required();
    c->callback([ctx, fa, fb] {
      Structure a = structure_from_json(load_json(*fa));
      Structure b = structure_from_json(load_json(*fb));
      ctx->emit(Json{{"isomorphic", isomorphic(a, b)}});
    });
  }
  {
    auto* c = b.leaf("struct", "", "census", "enumerate_exact",
                     "Count structures of a class up to isomorphism");
    auto cls = std::make_shared<std::string>();
    auto size = std::make_shared<int>(0);
    auto cumulative = std::make_shared<bool>(false);
    c->add_option("--class", *cls, "class name")->required();
    c->add_option("--size", *size, "universe size")->required();
    c->add_flag("--cumulative", *cumulative, "count sizes 1..size instead");
    c->callback([ctx, cls, size, cumulative] {
      ClassId id = class_from_name(*cls);
      std::size_t count =
          *cumulative ? enumerate_upto(id, *size).size() : enumerate_exact(id, *size).size();
      ctx->emit(Json{{"class", class_name(id)},
                     {"size", *size},
                     {"cumulative", *cumulative},
                     {"count", count}});
    });
  }
  {
    auto* c = b.leaf("struct", "", "pair", "pair_structures",
                     "Combine two structures into their tagged disjoint union");
    auto fa = std::make_shared<std::string>(), fb = std::make_shared<std::string>();
    c->add_option("left", *fa, "structure JSON")->required();
    c->add_option("right", *fb, "structure JSON")->required();
    c->callback([ctx, fa, fb] {
      Structure a = structure_from_json(load_json(*fa));
      Structure b = structure_from_json(load_json(*fb));
      ctx->emit(structure_to_json(pair_structures(a, b)));
    });
  }

  // --- logic ---------------------------------------------------------------
  {
    auto* c = b.leaf("logic", "Counting monadic second-order logic", "eval", "holds",
                     "Evaluate a sentence on a structure");
    auto ff = std::make_shared<std::string>(), fs = std::make_shared<std::string>();
    c->add_option("formula", *ff, "s-expression text file")->required();
    c->add_option("structure", *fs, "structure JSON")->required();
    c->callback([ctx, ff, fs] {
      FormulaPtr f = parse_formula(slurp(*ff));
      Structure a = structure_from_json(load_json(*fs));
      ctx->emit(Json{{"holds", holds(a, *f, ctx->budget)}});
    });
  }

  // --- trans ---------------------------------------------------------------
  {
    auto* c = b.leaf("trans", "Transductions between structure classes", "apply",
                     "apply", "Run a transduction on one structure");
    auto ft = std::make_shared<std::string>(), fs = std::make_shared<std::string>();
    c->add_option("transduction", *ft, "transduction JSON")->required();
    c->add_option("structure", *fs, "structure JSON")->required();
    c->callback([ctx, ft, fs] {
      Transduction t = transduction_from_json(load_json(*ft));
      Structure a = structure_from_json(load_json(*fs));
      Json outputs = Json::array();
      for (const auto& triple : apply(t, a, ctx->budget))
        outputs.push_back(Json{{"structure", structure_to_json(triple.output)},
                               {"origin", triple.origin}});
      ctx->emit(Json{{"count", outputs.size()}, {"outputs", std::move(outputs)}});
    });
  }
  {
    auto* c = b.leaf("trans", "", "compose", "compose",
                     "Chain two transductions, first then second");
    auto fa = std::make_shared<std::string>(), fb = std::make_shared<std::string>();
    c->add_option("first", *fa, "transduction JSON")->required();
    c->add_option("second", *fb, "transduction JSON")->required();
    c->callback([ctx, fa, fb] {
      Transduction t1 = transduction_from_json(load_json(*fa));
      Transduction t2 = transduction_from_json(load_json(*fb));
      ctx->emit(transduction_to_json(compose(t1, t2)));
    });
  }
  {
    auto* c = b.leaf("trans", "", "roundtrip", "check_encoding",
                     "Check decode(encode(A)) against A over an enumerated corpus");
    auto fe = std::make_shared<std::string>(), fd = std::make_shared<std::string>();
    auto cls = std::make_shared<std::string>();
    auto max = std::make_shared<int>(0);
    c->add_option("--enc", *fe, "encoding transduction JSON")->required();
    c->add_option("--dec", *fd, "decoding transduction JSON")->required();
    c->add_option("--class", *cls, "corpus class name")->required();
    c->add_option("--max", *max, "corpus sizes 1..max")->required();
    c->callback([ctx, fe, fd, cls, max] {
      Codec enc = codec_of(transduction_from_json(load_json(*fe)));
      Codec dec = codec_of(transduction_from_json(load_json(*fd)));
      auto corpus = enumerate_upto(class_from_name(*cls), *max);
      EncodingReport r = check_encoding(enc, dec, corpus, ctx->budget);
      ctx->emit(Json{{"total", r.total}, {"ok", r.ok()}, {"failures", r.failures}});
    });
  }

  // --- matroid ---------------------------------------------------------------
  {
    auto* c = b.leaf("matroid", "Matroid computations", "rank", "rank",
                     "Rank of an element set (default: the whole ground set)");
    auto fm = std::make_shared<std::string>();
    auto set = std::make_shared<std::vector<int>>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->add_option("--set", *set, "element names")->delimiter(',');
    c->callback([ctx, fm, set] {
      Matroid m = matroid_from_json(load_json(*fm));
      std::vector<int> elements = set->empty() ? m.gen.labels : *set;
      std::uint64_t mask = 0;
      for (int e : elements) mask |= std::uint64_t{1} << m.gen.position(e);
      ctx->emit(Json{{"set", elements}, {"rank", m.gen.rank(mask)}});
    });
  }
  {
    auto* c = b.leaf("matroid", "", "circuits", "circuits",
                     "List the minimal dependent sets");
    auto fm = std::make_shared<std::string>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->callback([ctx, fm] {
      ctx->emit(Json{{"circuits", circuits(matroid_from_json(load_json(*fm)).gen)}});
    });
  }
  {
    auto* c = b.leaf("matroid", "", "components", "connected_components",
                     "List the connected components");
    auto fm = std::make_shared<std::string>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->callback([ctx, fm] {
      ctx->emit(Json{
          {"components", connected_components(matroid_from_json(load_json(*fm)).gen)}});
    });
  }
  {
    auto* c = b.leaf("matroid", "", "dual", "dual", "Dual matroid");
    auto fm = std::make_shared<std::string>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->callback([ctx, fm] {
      ctx->emit(general_to_json(dual(matroid_from_json(load_json(*fm)).gen)));
    });
  }
  {
    auto* c = b.leaf("matroid", "", "minor", "delete_contract",
                     "Delete then contract element sets");
    auto fm = std::make_shared<std::string>();
    auto del = std::make_shared<std::vector<int>>();
    auto con = std::make_shared<std::vector<int>>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->add_option("--delete", *del, "element names to delete")->delimiter(',');
    c->add_option("--contract", *con, "element names to contract")->delimiter(',');
    c->callback([ctx, fm, del, con] {
      GeneralMatroid g = matroid_from_json(load_json(*fm)).gen;
      if (!del->empty()) g = delete_elements(g, *del);
      if (!con->empty()) g = contract_elements(g, *con);
      ctx->emit(general_to_json(g));
    });
  }
  {
    auto* c = b.leaf("matroid", "", "connectivity", "connectivity",
                     "Connectivity of a bipartition given by one side");
    auto fm = std::make_shared<std::string>();
    auto set = std::make_shared<std::vector<int>>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->add_option("--set", *set, "element names of one side")->required()->delimiter(',');
    c->callback([ctx, fm, set] {
      Matroid m = matroid_from_json(load_json(*fm));
      const RepresentedMatroid& rep = need_representation(m, "connectivity");
      ctx->emit(Json{{"set", *set}, {"connectivity", connectivity(rep, *set)}});
    });
  }
  {
    auto* c = b.leaf("matroid", "", "branchwidth", "branchwidth",
                     "Exact branchwidth with an optimal decomposition");
    auto fm = std::make_shared<std::string>();
    auto dot = std::make_shared<bool>(false);
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->add_flag("--dot", *dot, "print the decomposition tree as DOT text");
    c->callback([ctx, fm, dot] {
      Matroid m = matroid_from_json(load_json(*fm));
      BranchwidthResult r = branchwidth(need_representation(m, "branchwidth"));
      if (*dot) {
        ctx->text(decomposition_dot(r.decomposition, m.gen.labels));
        return;
      }
      ctx->emit(Json{{"width", r.width},
                     {"decomposition", decomposition_to_json(r.decomposition)}});
    });
  }
  {
    auto* c = b.leaf("matroid", "", "homog", "is_homogeneous",
                     "Check an ordered partition for homogeneity");
    auto fm = std::make_shared<std::string>(), fp = std::make_shared<std::string>();
    c->add_option("matroid", *fm, "matroid or multi-matroid JSON")->required();
    c->add_option("partition", *fp, "ordered partition JSON")->required();
    c->callback([ctx, fm, fp] {
      MultiMatroid mm = multi_from_json(load_json(*fm));
      OrderedPartition p = partition_from_json(load_json(*fp));
      HomogeneityReport r = is_homogeneous(mm, p);
      ctx->emit(Json{{"homogeneous", r.homogeneous}, {"violation", r.violation}});
    });
  }

  // --- width ---------------------------------------------------------------
  {
    auto* c = b.leaf("width", "Hypergraph width measures", "rank", "bipartition_rank",
                     "Cut-matrix rank of a vertex bipartition");
    auto fg = std::make_shared<std::string>();
    auto set = std::make_shared<std::vector<int>>();
    c->add_option("hypergraph", *fg, "hypergraph JSON")->required();
    c->add_option("--set", *set, "vertices of one side")->required()->delimiter(',');
    c->callback([ctx, fg, set] {
      Hypergraph g = hypergraph_from_json(load_json(*fg));
      ctx->emit(Json{{"set", *set}, {"rank", bipartition_rank(g, *set)}});
    });
  }
  {
    auto* c = b.leaf("width", "", "sensitivity", "sensitivity",
                     "Number of equivalence classes across a bipartition");
    auto fg = std::make_shared<std::string>();
    auto set = std::make_shared<std::vector<int>>();
    c->add_option("hypergraph", *fg, "hypergraph JSON")->required();
    c->add_option("--set", *set, "vertices of one side")->required()->delimiter(',');
    c->callback([ctx, fg, set] {
      Hypergraph g = hypergraph_from_json(load_json(*fg));
      ctx->emit(Json{{"set", *set}, {"sensitivity", sensitivity(g, *set)}});
    });
  }
  {
    auto* c = b.leaf("width", "", "hyperrankwidth", "hyper_rankwidth",
                     "Exact hyper-rankwidth with an optimal decomposition");
    auto fg = std::make_shared<std::string>();
    auto dot = std::make_shared<bool>(false);
    c->add_option("hypergraph", *fg, "hypergraph JSON")->required();
    c->add_flag("--dot", *dot, "print the decomposition tree as DOT text");
    c->callback([ctx, fg, dot] {
      Hypergraph g = hypergraph_from_json(load_json(*fg));
      HyperRankwidthResult r = hyper_rankwidth(g);
      if (*dot) {
        std::vector<int> labels(g.n);
        for (int v = 0; v < g.n; ++v) labels[v] = v;
        ctx->text(decomposition_dot(r.decomposition, labels));
        return;
      }
      ctx->emit(Json{{"width", r.width},
                     {"decomposition", decomposition_to_json(r.decomposition)}});
    });
  }
  {
    auto* c = b.leaf("width", "", "compile", "compile_decomposition",
                     "Compile a rank decomposition into a bottom-up automaton");
    auto fg = std::make_shared<std::string>(), ft = std::make_shared<std::string>();
    auto root = std::make_shared<int>(-1);
    auto colours = std::make_shared<int>(-1);
    c->add_option("hypergraph", *fg, "hypergraph JSON")->required();
    c->add_option("--tree", *ft, "decomposition JSON (default: optimal search)");
    c->add_option("--root", *root, "root edge index");
    c->add_option("--colours", *colours, "colour budget");
    c->callback([ctx, fg, ft, root, colours] {
      Hypergraph g = hypergraph_from_json(load_json(*fg));
      RankDecomposition t = ft->empty() ? hyper_rankwidth(g).decomposition
                                        : decomposition_from_json(load_json(*ft));
      ctx->emit(compiled_to_json(compile_decomposition(g, t, *root, *colours)));
    });
  }
  {
    auto* c = b.leaf("width", "", "decode", "decode_decomposition",
                     "Rebuild the hypergraph recognized by a compiled automaton");
    auto fc = std::make_shared<std::string>();
    c->add_option("compiled", *fc, "compiled decomposition JSON")->required();
    c->callback([ctx, fc] {
      ctx->emit(hypergraph_to_json(
          decode_decomposition(compiled_from_json(load_json(*fc)))));
    });
  }

  // --- enc ---------------------------------------------------------------
  {
    auto* c = b.leaf("enc", "Encodings between structure classes", "list",
                     "encoding_catalog", "List the encoding catalog");
    c->callback([ctx] {
      Json rows = Json::array();
      for (const auto& e : encoding_catalog())
        rows.push_back(Json{{"id", e.id},
                            {"input", class_name(e.input)},
                            {"output", class_name(e.output)},
                            {"expansion", e.expansion},
                            {"transduction", e.realization.has_value()}});
      ctx->emit(rows);
    });
  }
  {
    auto* c = b.leaf("enc", "", "run", "encode",
                     "Encode a structure (or decode with --decode)");
    auto id = std::make_shared<std::string>(), fs = std::make_shared<std::string>();
    auto dec = std::make_shared<bool>(false);
    c->add_option("--id", *id, "catalog id or unique prefix")->required();
    c->add_option("--in", *fs, "structure JSON")->required();
    c->add_flag("--decode", *dec, "run the decoding direction");
    c->callback([ctx, id, fs, dec] {
      const CatalogEntry& e = entry_by_prefix(*id);
      Structure a = structure_from_json(load_json(*fs));
      ctx->emit(structure_to_json(*dec ? decode(e.id, a) : encode(e.id, a)));
    });
  }
  {
    auto* c = b.leaf("enc", "", "roundtrip", "roundtrip_report",
                     "Round-trip one catalog entry over its enumerated corpus");
    auto id = std::make_shared<std::string>();
    auto max = std::make_shared<int>(0);
    c->add_option("--id", *id, "catalog id or unique prefix")->required();
    c->add_option("--max", *max, "corpus sizes 1..max")->required();
    c->callback([ctx, id, max] {
      const CatalogEntry& e = entry_by_prefix(*id);
      EncodingReport r =
          roundtrip_report(e.id, enumerate_upto(e.input, *max), ctx->budget);
      ctx->emit(Json{{"id", e.id},
                     {"total", r.total},
                     {"ok", r.ok()},
                     {"failures", r.failures}});
    });
  }

  // --- algebra ---------------------------------------------------------------
  {
    auto* c = b.leaf("algebra", "Branchwidth terms and factorization forests",
                     "eval-term", "eval_term", "Evaluate a term to a ported matroid");
    auto ft = std::make_shared<std::string>();
    c->add_option("term", *ft, "term JSON")->required();
    c->callback([ctx, ft] {
      ctx->emit(ported_to_json(eval_term(term_from_json(load_json(*ft)))));
    });
  }
  {
    auto* c = b.leaf("algebra", "", "compile-term", "term_from_branch_decomposition",
                     "Turn a matroid and branch decomposition into a term");
    auto fm = std::make_shared<std::string>(), ft = std::make_shared<std::string>();
    c->add_option("matroid", *fm, "matroid JSON")->required();
    c->add_option("tree", *ft, "branch decomposition JSON")->required();
    c->callback([ctx, fm, ft] {
      Matroid m = matroid_from_json(load_json(*fm));
      BranchDecomposition t = decomposition_from_json(load_json(*ft));
      ctx->emit(term_to_json(
          term_from_branch_decomposition(need_representation(m, "term compilation"), t)));
    });
  }
  {
    auto* c = b.leaf("algebra", "", "factorize", "factorization_tree",
                     "Build a bounded-height factorization tree for a word");
    auto fh = std::make_shared<std::string>(), word = std::make_shared<std::string>();
    auto dot = std::make_shared<bool>(false);
    c->add_option("--monoid", *fh, "homomorphism JSON")->required();
    c->add_option("--word", *word, "input word")->required();
    c->add_flag("--dot", *dot, "print the tree as DOT text");
    c->callback([ctx, fh, word, dot] {
      Homomorphism h = homomorphism_from_json(load_json(*fh));
      FactorizationTree t = factorization_tree(h, *word);
      if (*dot) {
        ctx->text(factorization_dot(t));
        return;
      }
      ctx->emit(Json{{"height", tree_height(t)},
                     {"product", t.element},
                     {"tree", factorization_to_json(t)}});
    });
  }
  {
    auto* c = b.leaf("algebra", "", "probe", "recognizability_probe",
                     "Tabulate a sentence composed through a transduction");
    auto ft = std::make_shared<std::string>(), fs = std::make_shared<std::string>();
    auto max = std::make_shared<int>(0);
    c->add_option("--trans", *ft, "transduction JSON")->required();
    c->add_option("--sentence", *fs, "s-expression text file")->required();
    c->add_option("--max", *max, "corpus sizes 1..max")->required();
    c->callback([ctx, ft, fs, max] {
      Transduction t = transduction_from_json(load_json(*ft));
      FormulaPtr f = parse_formula(slurp(*fs));
      ProbeReport r = recognizability_probe(t, f, *max, ctx->budget);
      std::vector<int> table(r.table.begin(), r.table.end());
      ctx->emit(Json{{"structures", r.structures},
                     {"table", table},
                     {"disagreements", r.disagreements},
                     {"first_disagreement", r.first_disagreement}});
    });
  }
}

inline void build_app(CLI::App& app, CliContext& ctx, std::vector<CommandInfo>& table) {
  app.require_subcommand(1);
  app.add_flag("--pretty", ctx.pretty, "indent JSON output");
  app.add_option("--seed", ctx.seed, "seed for randomized corpora");
  app.add_option("--budget", ctx.budget.logic, "set-quantifier enumeration budget");
  app.add_option("--fanout", ctx.budget.colour_fanout, "colouring fan-out budget");
  app.add_option("--steps", ctx.budget.steps, "evaluation step budget");
  CliBuilder b{&app, &ctx, &table, {}};
  register_commands(b);
}

}  // namespace detail

// The subcommand table, one row per leaf with the library operation it calls.
inline const std::vector<CommandInfo>& cli_command_table() {
  static const std::vector<CommandInfo> table = [] {
    CLI::App app{"mso"};
    detail::CliContext ctx;
    std::vector<CommandInfo> t;
    detail::build_app(app, ctx, t);
    return t;
  }();
  return table;
}

// In-process entry point used by main() and by the tests.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"MSO structures, transductions, matroids and width measures", "mso"};
  detail::CliContext ctx;
  ctx.out = &out;
  std::vector<CommandInfo> table;
  detail::build_app(app, ctx, table);

  std::vector<const char*> argv{"mso"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* leaf = &app;
    while (!leaf->get_subcommands().empty()) leaf = leaf->get_subcommands().front();
    out << leaf->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mso
