// Copyright 2026 The concept-eval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// Knowledge-graph slice: typing assertions, the subclass DAG and property
/// domain/range declarations, plus structural queries over them.

#ifndef CONCEPT_EVAL_KG_HPP
#define CONCEPT_EVAL_KG_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/embedding.hpp"
#include "concept_eval/error.hpp"

namespace concept_eval {

enum class TypingMode { kDirect, kTransitive };

inline std::string_view to_string(TypingMode mode) {
  return mode == TypingMode::kDirect ? "direct" : "transitive";
}

inline TypingMode parse_typing_mode(std::string_view s) {
  if (s == "direct") return TypingMode::kDirect;
  if (s == "transitive") return TypingMode::kTransitive;
  throw Error(ErrorKind::kInvalidArgument, "unknown typing mode '" + std::string(s) + "'");
}

/// Which triples an N-Triples read keeps.
enum class TripleSelection { kTyping, kSubclass, kSchema, kAll };

inline TripleSelection parse_triple_selection(std::string_view s) {
  if (s == "typing") return TripleSelection::kTyping;
  if (s == "subclass") return TripleSelection::kSubclass;
  if (s == "schema") return TripleSelection::kSchema;
  if (s == "all") return TripleSelection::kAll;
  throw Error(ErrorKind::kInvalidArgument, "unknown triple selection '" + std::string(s) + "'");
}

struct PropertySchema {
  std::vector<std::string> domains;
  std::vector<std::string> ranges;
};

using IdSet = std::set<std::string, std::less<>>;

class KnowledgeSliceBuilder;

/// Immutable view of a finalized knowledge-graph slice. The subclass graph
/// is acyclic; concepts without parents are roots (depth 1) and a child's
/// depth is one more than its shallowest parent.
class KnowledgeSlice {
 public:
  KnowledgeSlice() = default;

  const IdSet& concepts() const { return concepts_; }
  const IdSet& entities() const { return entities_; }
  const IdSet& properties() const { return properties_; }

  bool has_concept(std::string_view c) const { return concepts_.find(c) != concepts_.end(); }
  bool has_entity(std::string_view e) const { return typing_.find(e) != typing_.end(); }

  /// Concepts asserted for `entity` (direct rdf:type edges only).
  const IdSet& types_of(std::string_view entity) const {
    const auto it = typing_.find(entity);
    if (it == typing_.end()) throw Error(ErrorKind::kUnknownIdentifier, "entity '" + std::string(entity) + "' has no typing");
    return it->second;
  }

  const PropertySchema& schema(std::string_view property) const {
    const auto it = schema_.find(property);
    if (it == schema_.end() || it->second.domains.empty() || it->second.ranges.empty()) {
      throw Error(ErrorKind::kMissingSchema, "property '" + std::string(property) + "' lacks a declared domain and range");
    }
    return it->second;
  }

  bool has_schema(std::string_view property) const {
    const auto it = schema_.find(property);
    return it != schema_.end() && !it->second.domains.empty() && !it->second.ranges.empty();
  }

  std::size_t depth(std::string_view c) const { return depth_[index_of(c)]; }

  std::vector<std::string> parents(std::string_view c) const { return names(parents_[index_of(c)]); }
  std::vector<std::string> children(std::string_view c) const { return names(children_[index_of(c)]); }

  std::vector<std::string> roots() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (parents_[i].empty()) out.push_back(names_[i]);
    }
    return out;
  }

  /// `c` and everything above it.
  std::vector<std::string> ancestors(std::string_view c) const { return names(reach(index_of(c), parents_)); }
  /// `c` and everything below it.
  std::vector<std::string> descendants(std::string_view c) const { return names(reach(index_of(c), children_)); }

  /// Entities whose direct typing contains `c`, sorted.
  const std::vector<std::string>& direct_members(std::string_view c) const { return members_[index_of(c)]; }

  // Index-level access used by the hierarchy queries.
  std::size_t index_of(std::string_view c) const {
    const auto it = concept_index_.find(c);
    if (it == concept_index_.end()) throw Error(ErrorKind::kUnknownIdentifier, "unknown concept '" + std::string(c) + "'");
    return it->second;
  }
  const std::string& name_of(std::size_t i) const { return names_[i]; }
  std::size_t depth_at(std::size_t i) const { return depth_[i]; }
  const std::vector<std::size_t>& parents_at(std::size_t i) const { return parents_[i]; }
  const std::vector<std::size_t>& children_at(std::size_t i) const { return children_[i]; }

  /// Marks every node reachable from `start` along `edges` (including start).
  std::vector<std::size_t> reach(std::size_t start, const std::vector<std::vector<std::size_t>>& edges) const {
    std::vector<char> seen(names_.size(), 0);
    std::vector<std::size_t> stack{start}, out;
    seen[start] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      out.push_back(u);
      for (const auto v : edges[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const std::vector<std::vector<std::size_t>>& parent_edges() const { return parents_; }
  const std::vector<std::vector<std::size_t>>& child_edges() const { return children_; }

 private:
  friend class KnowledgeSliceBuilder;

  std::vector<std::string> names(const std::vector<std::size_t>& idx) const {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (const auto i : idx) out.push_back(names_[i]);
    std::sort(out.begin(), out.end());
    return out;
  }

  IdSet concepts_;
  IdSet entities_;
  IdSet properties_;
  std::map<std::string, IdSet, std::less<>> typing_;
  std::map<std::string, PropertySchema, std::less<>> schema_;

  // Concept graph, indexed by position in the sorted concept set.
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> concept_index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> depth_;
  std::vector<std::vector<std::string>> members_;
};

/// Counts kept by the N-Triples reader for the lines it does not use.
struct TripleStats {
  std::size_t typing = 0;
  std::size_t subclass = 0;
  std::size_t schema = 0;
  std::size_t declarations = 0;
  std::size_t literal_skipped = 0;
  std::size_t blank_node_skipped = 0;
  std::size_t ignored = 0;

  TripleStats& operator+=(const TripleStats& o) {
    typing += o.typing;
    subclass += o.subclass;
    schema += o.schema;
    declarations += o.declarations;
    literal_skipped += o.literal_skipped;
    blank_node_skipped += o.blank_node_skipped;
    ignored += o.ignored;
    return *this;
  }
};

/// Accumulates assertions from any number of sources, then validates them.
class KnowledgeSliceBuilder {
 public:
  void add_concept(std::string c) { concepts_.insert(std::move(c)); }

  void add_property(std::string p) { properties_.insert(std::move(p)); }

  void add_typing(std::string entity, std::string concept_id) {
    concepts_.insert(concept_id);
    typing_[std::move(entity)].insert(std::move(concept_id));
  }

  void add_subclass(std::string child, std::string parent) {
    concepts_.insert(child);
    concepts_.insert(parent);
    subclass_[std::move(child)].insert(std::move(parent));
  }

  void add_domain(std::string property, std::string concept_id) {
    concepts_.insert(concept_id);
    properties_.insert(property);
    push_unique(schema_[std::move(property)].domains, std::move(concept_id));
  }

  void add_range(std::string property, std::string concept_id) {
    concepts_.insert(concept_id);
    properties_.insert(property);
    push_unique(schema_[std::move(property)].ranges, std::move(concept_id));
  }

  /// Validates acyclicity and computes depths and membership indices.
  KnowledgeSlice finalize() const {
    KnowledgeSlice s;
    s.concepts_ = concepts_;
    s.properties_ = properties_;
    s.typing_ = typing_;
    s.schema_ = schema_;
    for (const auto& [entity, types] : typing_) s.entities_.insert(entity);

    s.names_.assign(concepts_.begin(), concepts_.end());
    for (std::size_t i = 0; i < s.names_.size(); ++i) s.concept_index_.emplace(s.names_[i], i);
    const std::size_t n = s.names_.size();
    s.parents_.assign(n, {});
    s.children_.assign(n, {});
    for (const auto& [child, parents] : subclass_) {
      const auto c = s.concept_index_.at(child);
      for (const auto& parent : parents) {
        const auto p = s.concept_index_.at(parent);
        s.parents_[c].push_back(p);
        s.children_[p].push_back(c);
      }
    }
    for (auto& list : s.children_) std::sort(list.begin(), list.end());

    check_acyclic(s);

    // Shortest distance from any root, counting the root as depth 1.
    constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
    s.depth_.assign(n, kUnset);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.parents_[i].empty()) {
        s.depth_[i] = 1;
        queue.push_back(i);
      }
    }
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (const auto v : s.children_[u]) {
        if (s.depth_[v] == kUnset) {
          s.depth_[v] = s.depth_[u] + 1;
          queue.push_back(v);
        }
      }
    }

    s.members_.assign(n, {});
    for (const auto& [entity, types] : typing_) {
      for (const auto& c : types) s.members_[s.concept_index_.at(c)].push_back(entity);
    }
    return s;
  }

 private:
  template <typename T>
  static void push_unique(std::vector<T>& list, T value) {
    if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(std::move(value));
  }

  static void check_acyclic(const KnowledgeSlice& s) {
    const std::size_t n = s.names_.size();
    std::vector<int> color(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> via(n, n);
    for (std::size_t root = 0; root < n; ++root) {
      if (color[root] != 0) continue;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
      color[root] = 1;
      while (!stack.empty()) {
        auto& [u, next] = stack.back();
        if (next < s.parents_[u].size()) {
          const auto v = s.parents_[u][next++];
          if (color[v] == 1) {
            std::vector<std::string> cycle{s.names_[v]};
            for (auto w = u; w != v; w = via[w]) cycle.push_back(s.names_[w]);
            cycle.push_back(s.names_[v]);
            std::reverse(cycle.begin() + 1, cycle.end() - 1);
            std::string path;
            for (std::size_t i = 0; i < cycle.size(); ++i) path += (i ? " -> " : "") + cycle[i];
            throw Error(ErrorKind::kCycle, "subclass cycle: " + path);
          }
          if (color[v] == 0) {
            color[v] = 1;
            via[v] = u;
            stack.emplace_back(v, 0);
          }
        } else {
          color[u] = 2;
          stack.pop_back();
        }
      }
    }
  }

  IdSet concepts_;
  IdSet properties_;
  std::map<std::string, IdSet, std::less<>> typing_;
  std::map<std::string, IdSet, std::less<>> subclass_;
  std::map<std::string, PropertySchema, std::less<>> schema_;
};

// ---------------------------------------------------------------------------
// Readers
// ---------------------------------------------------------------------------

namespace vocab {
inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";

/// True for `rdf:type`-style CURIEs and their full IRI forms.
inline bool is_term(std::string_view id, std::string_view ns, std::string_view curie_prefix, std::string_view local) {
  if (id.size() == curie_prefix.size() + 1 + local.size() && detail::starts_with(id, curie_prefix) &&
      id[curie_prefix.size()] == ':' && id.substr(curie_prefix.size() + 1) == local) {
    return true;
  }
  return id.size() == ns.size() + local.size() && detail::starts_with(id, ns) && id.substr(ns.size()) == local;
}

inline bool is_type(std::string_view p) { return p == "a" || is_term(p, kRdf, "rdf", "type"); }
inline bool is_subclass_of(std::string_view p) { return is_term(p, kRdfs, "rdfs", "subClassOf"); }
inline bool is_domain(std::string_view p) { return is_term(p, kRdfs, "rdfs", "domain"); }
inline bool is_range(std::string_view p) { return is_term(p, kRdfs, "rdfs", "range"); }
inline bool is_class_decl(std::string_view o) {
  return is_term(o, kOwl, "owl", "Class") || is_term(o, kRdfs, "rdfs", "Class");
}
inline bool is_property_decl(std::string_view o) {
  return is_term(o, kOwl, "owl", "ObjectProperty") || is_term(o, kRdf, "rdf", "Property") ||
         is_term(o, kOwl, "owl", "DatatypeProperty");
}
}  // namespace vocab

namespace detail {

enum class TermKind { kIri, kLiteral, kBlank };

struct Term {
  TermKind kind;
  std::string_view text;  // IRI without brackets
};

/// Reads one term starting at `pos`; advances `pos` past it.
inline bool next_term(std::string_view line, std::size_t& pos, Term& term) {
  while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  if (pos >= line.size()) return false;
  if (line[pos] == '<') {
    const auto end = line.find('>', pos + 1);
    if (end == std::string_view::npos || end == pos + 1) return false;
    term = {TermKind::kIri, line.substr(pos + 1, end - pos - 1)};
    if (term.text.find_first_of(" \t") != std::string_view::npos) return false;
    pos = end + 1;
    return true;
  }
  if (line[pos] == '"') {
    std::size_t i = pos + 1;
    while (i < line.size() && line[i] != '"') i += line[i] == '\\' ? 2 : 1;
    if (i >= line.size()) return false;
    ++i;
    // Datatype or language tag.
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '.') {
      if (line[i] == '<') {
        const auto end = line.find('>', i);
        if (end == std::string_view::npos) return false;
        i = end + 1;
      } else {
        ++i;
      }
    }
    term = {TermKind::kLiteral, line.substr(pos, i - pos)};
    pos = i;
    return true;
  }
  if (line.substr(pos, 2) == "_:") {
    const auto start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    term = {TermKind::kBlank, line.substr(start, pos - start)};
    return true;
  }
  return false;
}

}  // namespace detail

/// Line-oriented N-Triples subset reader. Literal and blank-node lines are
/// counted and skipped; multi-line literals are not supported.
inline TripleStats read_ntriples(KnowledgeSliceBuilder& builder, const std::filesystem::path& path,
                                 TripleSelection selection = TripleSelection::kAll, const PrefixMap& prefixes = {}) {
  TripleStats stats;
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  const auto want = [&](TripleSelection s) { return selection == TripleSelection::kAll || selection == s; };
  while (detail::read_line(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::size_t pos = 0;
    detail::Term s, p, o;
    if (!detail::next_term(body, pos, s) || !detail::next_term(body, pos, p) || !detail::next_term(body, pos, o)) {
      throw Error(ErrorKind::kMalformedLine, "expected '<s> <p> <o> .' in " + path.string(), line_no);
    }
    const auto tail = detail::trim(body.substr(pos));
    if (tail != "." || p.kind != detail::TermKind::kIri || s.kind == detail::TermKind::kLiteral) {
      throw Error(ErrorKind::kMalformedLine, "expected '<s> <p> <o> .' in " + path.string(), line_no);
    }
    if (o.kind == detail::TermKind::kLiteral) {
      ++stats.literal_skipped;
      continue;
    }
    if (s.kind == detail::TermKind::kBlank || o.kind == detail::TermKind::kBlank) {
      ++stats.blank_node_skipped;
      continue;
    }
    const std::string subject = prefixes.expand(s.text);
    const std::string predicate = prefixes.expand(p.text);
    const std::string object = prefixes.expand(o.text);
    if (vocab::is_type(predicate)) {
      if (vocab::is_class_decl(object)) {
        if (!want(TripleSelection::kSubclass) && !want(TripleSelection::kSchema)) {
          ++stats.ignored;
          continue;
        }
        builder.add_concept(subject);
        ++stats.declarations;
      } else if (vocab::is_property_decl(object)) {
        if (!want(TripleSelection::kSchema)) {
          ++stats.ignored;
          continue;
        }
        builder.add_property(subject);
        ++stats.declarations;
      } else if (want(TripleSelection::kTyping)) {
        builder.add_typing(subject, object);
        ++stats.typing;
      } else {
        ++stats.ignored;
      }
    } else if (vocab::is_subclass_of(predicate) && want(TripleSelection::kSubclass)) {
      builder.add_subclass(subject, object);
      ++stats.subclass;
    } else if (vocab::is_domain(predicate) && want(TripleSelection::kSchema)) {
      builder.add_domain(subject, object);
      ++stats.schema;
    } else if (vocab::is_range(predicate) && want(TripleSelection::kSchema)) {
      builder.add_range(subject, object);
      ++stats.schema;
    } else {
      ++stats.ignored;
    }
  }
  return stats;
}

/// `entity TAB concept` per line.
inline void read_typing_tsv(KnowledgeSliceBuilder& builder, const std::filesystem::path& path,
                            const PrefixMap& prefixes = {}) {
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::split(body, '\t');
    if (fields.size() != 2 || detail::trim(fields[0]).empty() || detail::trim(fields[1]).empty()) {
      throw Error(ErrorKind::kMalformedLine, "expected 'entity TAB concept' in " + path.string(), line_no);
    }
    builder.add_typing(prefixes.expand(detail::trim(fields[0])), prefixes.expand(detail::trim(fields[1])));
  }
}

/// `property TAB domain TAB range` per line.
inline void read_schema_tsv(KnowledgeSliceBuilder& builder, const std::filesystem::path& path,
                            const PrefixMap& prefixes = {}) {
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::split(body, '\t');
    if (fields.size() != 3 || std::any_of(fields.begin(), fields.end(),
                                          [](std::string_view f) { return detail::trim(f).empty(); })) {
      throw Error(ErrorKind::kMalformedLine, "expected 'property TAB domain TAB range' in " + path.string(), line_no);
    }
    const auto property = prefixes.expand(detail::trim(fields[0]));
    builder.add_domain(property, prefixes.expand(detail::trim(fields[1])));
    builder.add_range(property, prefixes.expand(detail::trim(fields[2])));
  }
}

inline KnowledgeSlice load_ntriples(const std::filesystem::path& path, TripleSelection selection = TripleSelection::kAll,
                                    const PrefixMap& prefixes = {}) {
  KnowledgeSliceBuilder builder;
  read_ntriples(builder, path, selection, prefixes);
  return builder.finalize();
}

inline KnowledgeSlice load_typing_tsv(const std::filesystem::path& path, const PrefixMap& prefixes = {}) {
  KnowledgeSliceBuilder builder;
  read_typing_tsv(builder, path, prefixes);
  return builder.finalize();
}

/// Reads a KG input by extension: `.nt` as N-Triples; `.tsv` as typing
/// (two columns) or schema (three columns), decided by the first data row.
inline TripleStats read_kg_file(KnowledgeSliceBuilder& builder, const std::filesystem::path& path,
                                const PrefixMap& prefixes = {}) {
  const auto ext = detail::to_lower(path.extension().string());
  if (ext == ".tsv" || ext == ".txt") {
    auto in = detail::open_input(path);
    std::string line;
    while (detail::read_line(in, line)) {
      const auto body = detail::trim(line);
      if (body.empty() || body.front() == '#') continue;
      if (detail::split(body, '\t').size() == 3) {
        read_schema_tsv(builder, path, prefixes);
      } else {
        read_typing_tsv(builder, path, prefixes);
      }
      break;
    }
    return {};
  }
  return read_ntriples(builder, path, TripleSelection::kAll, prefixes);
}

// ---------------------------------------------------------------------------
// Structural queries
// ---------------------------------------------------------------------------

namespace detail {
inline std::vector<char> ancestor_mask(const KnowledgeSlice& slice, std::size_t c) {
  std::vector<char> mask(slice.concepts().size(), 0);
  for (const auto a : slice.reach(c, slice.parent_edges())) mask[a] = 1;
  return mask;
}
}  // namespace detail

/// Common ancestor of maximum depth; ties go to the smallest identifier.
inline std::string lowest_common_ancestor(const KnowledgeSlice& slice, std::string_view a, std::string_view b) {
  const auto ia = slice.index_of(a);
  const auto ib = slice.index_of(b);
  const auto mask = detail::ancestor_mask(slice, ia);
  std::size_t best = mask.size();
  for (const auto c : slice.reach(ib, slice.parent_edges())) {
    if (!mask[c]) continue;
    // Indices follow sorted identifier order, so the first of equal depth wins.
    if (best == mask.size() || slice.depth_at(c) > slice.depth_at(best)) best = c;
  }
  if (best == mask.size()) {
    throw Error(ErrorKind::kDisconnected,
                "concepts '" + std::string(a) + "' and '" + std::string(b) + "' share no ancestor");
  }
  return slice.name_of(best);
}

/// Shortest undirected path length in the subclass DAG. The pair must share
/// an ancestor; otherwise the query is an error rather than infinity.
inline std::size_t path_distance(const KnowledgeSlice& slice, std::string_view a, std::string_view b) {
  const auto ia = slice.index_of(a);
  const auto ib = slice.index_of(b);
  if (ia == ib) return 0;
  lowest_common_ancestor(slice, a, b);  // throws kDisconnected
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> dist(slice.concepts().size(), kUnset);
  std::deque<std::size_t> queue{ia};
  dist[ia] = 0;
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (const auto* edges : {&slice.parents_at(u), &slice.children_at(u)}) {
      for (const auto v : *edges) {
        if (dist[v] != kUnset) continue;
        dist[v] = dist[u] + 1;
        if (v == ib) return dist[v];
        queue.push_back(v);
      }
    }
  }
  throw Error(ErrorKind::kDisconnected, "no path between '" + std::string(a) + "' and '" + std::string(b) + "'");
}

/// Entities typed by `c` (direct), or by `c` or any descendant (transitive).
inline std::vector<std::string> entities_of(const KnowledgeSlice& slice, std::string_view c, TypingMode mode) {
  const auto ic = slice.index_of(c);
  if (mode == TypingMode::kDirect) return slice.direct_members(c);
  std::set<std::string> out;
  for (const auto d : slice.reach(ic, slice.child_edges())) {
    const auto& members = slice.direct_members(slice.name_of(d));
    out.insert(members.begin(), members.end());
  }
  return {out.begin(), out.end()};
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_KG_HPP
