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
/// Embedding tables: loading from word2vec/GloVe/TSV files, writing the
/// word2vec formats back out, token composition and cosine similarity.

#ifndef CONCEPT_EVAL_EMBEDDING_HPP
#define CONCEPT_EVAL_EMBEDDING_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "concept_eval/detail/text.hpp"
#include "concept_eval/error.hpp"

namespace concept_eval {

using Vector = std::vector<double>;

enum class CompositionMode { kAverage, kSum };

inline std::string_view to_string(CompositionMode mode) {
  return mode == CompositionMode::kAverage ? "avg" : "sum";
}

inline CompositionMode parse_composition_mode(std::string_view s) {
  if (s == "avg" || s == "average") return CompositionMode::kAverage;
  if (s == "sum") return CompositionMode::kSum;
  throw Error(ErrorKind::kInvalidArgument, "unknown composition mode '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Vector arithmetic. Accumulation is always in double, whatever the input.
// ---------------------------------------------------------------------------

template <typename T>
double dot(std::span<const T> u, std::span<const T> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += static_cast<double>(u[i]) * static_cast<double>(v[i]);
  return acc;
}

template <typename T>
double norm(std::span<const T> u) {
  return std::sqrt(dot(u, u));
}

/// Cosine similarity clamped to [-1, 1]. Throws kZeroNorm if either vector
/// has zero norm; callers that know the identifier should check first.
template <typename T>
double cosine(std::span<const T> u, std::span<const T> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "cosine of vectors with lengths " + std::to_string(u.size()) +
                                                   " and " + std::to_string(v.size()));
  }
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = static_cast<double>(u[i]);
    const double b = static_cast<double>(v[i]);
    uv += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorKind::kZeroNorm, "cosine of a zero-norm vector");
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

inline double cosine(const Vector& u, const Vector& v) {
  return cosine(std::span<const double>(u), std::span<const double>(v));
}

/// Compensated (Neumaier) running sum of equal-length rows.
class RowAccumulator {
 public:
  explicit RowAccumulator(std::size_t dimension) : sum_(dimension, 0.0), carry_(dimension, 0.0) {}

  void add(std::span<const double> row) {
    for (std::size_t i = 0; i < sum_.size(); ++i) {
      const double t = sum_[i] + row[i];
      if (std::abs(sum_[i]) >= std::abs(row[i])) {
        carry_[i] += (sum_[i] - t) + row[i];
      } else {
        carry_[i] += (row[i] - t) + sum_[i];
      }
      sum_[i] = t;
    }
    ++count_;
  }

  std::size_t count() const { return count_; }

  Vector sum() const {
    Vector out(sum_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sum_[i] + carry_[i];
    return out;
  }

  Vector mean() const {
    Vector out = sum();
    for (double& x : out) x /= static_cast<double>(count_);
    return out;
  }

 private:
  Vector sum_;
  Vector carry_;
  std::size_t count_ = 0;
};

// ---------------------------------------------------------------------------
// Identifier prefixes
// ---------------------------------------------------------------------------

/// Maps CURIE prefixes to IRI namespaces so that `dbo:City` and
/// `http://dbpedia.org/ontology/City` name the same identifier.
class PrefixMap {
 public:
  PrefixMap() = default;

  void add(std::string prefix, std::string expansion) {
    if (!prefix.empty() && prefix.back() == ':') prefix.pop_back();
    if (prefix.empty() || expansion.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "prefix and expansion must be non-empty");
    }
    entries_[std::move(prefix)] = std::move(expansion);
  }

  /// Reads `prefix TAB expansion` lines; '#' starts a comment line.
  static PrefixMap load(const std::filesystem::path& path) {
    PrefixMap map;
    auto in = detail::open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (detail::read_line(in, line)) {
      ++line_no;
      const auto body = detail::trim(line);
      if (body.empty() || body.front() == '#') continue;
      const auto fields = detail::split(body, '\t');
      if (fields.size() != 2) {
        throw Error(ErrorKind::kMalformedLine, "expected 'prefix TAB expansion' in " + path.string(), line_no);
      }
      map.add(std::string(detail::trim(fields[0])), std::string(detail::trim(fields[1])));
    }
    return map;
  }

  bool empty() const { return entries_.empty(); }

  std::string expand(std::string_view id) const {
    const auto colon = id.find(':');
    if (colon == std::string_view::npos || colon == 0) return std::string(id);
    const auto rest = id.substr(colon + 1);
    if (detail::starts_with(rest, "//")) return std::string(id);  // already an IRI
    const auto it = entries_.find(id.substr(0, colon));
    if (it == entries_.end()) return std::string(id);
    return it->second + std::string(rest);
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// ---------------------------------------------------------------------------
// EmbeddingTable
// ---------------------------------------------------------------------------

struct SourceMeta {
  std::string format;
  std::string path;
  std::string composition;  // empty unless built by composing label tokens
  bool lowercased = false;
};

/// Immutable-after-load mapping from identifiers to `dimension()`-long
/// vectors stored row-major in double precision.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {
    if (dimension == 0) throw Error(ErrorKind::kInvalidArgument, "embedding dimension must be >= 1");
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  /// Appends a row. Identifiers must be unique and non-empty; values finite.
  void add(std::string id, std::span<const double> values, std::size_t line = 0) {
    if (id.empty()) throw Error(ErrorKind::kInvalidToken, "empty identifier", line);
    if (values.size() != dimension_) {
      throw Error(ErrorKind::kRowArity,
                  "row '" + id + "' has " + std::to_string(values.size()) + " values, declared dimension is " +
                      std::to_string(dimension_),
                  line);
    }
    for (const double x : values) {
      if (!std::isfinite(x)) throw Error(ErrorKind::kNonFinite, "non-finite value in row '" + id + "'", line);
    }
    const auto [it, inserted] = index_.emplace(id, ids_.size());
    if (!inserted) throw Error(ErrorKind::kDuplicateIdentifier, "duplicate identifier '" + id + "'", line);
    ids_.push_back(std::move(id));
    data_.insert(data_.end(), values.begin(), values.end());
  }

  void add(std::string id, const Vector& values, std::size_t line = 0) {
    add(std::move(id), std::span<const double>(values), line);
  }

  std::optional<std::size_t> find(std::string_view id) const {
    const auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(std::string_view id) const { return index_.find(id) != index_.end(); }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dimension_, dimension_);
  }

  std::span<const double> at(std::string_view id) const {
    const auto i = find(id);
    if (!i) throw Error(ErrorKind::kUnknownIdentifier, "identifier '" + std::string(id) + "' has no embedding");
    return row(*i);
  }

  /// Like at(), but also rejects a zero-norm vector naming the identifier.
  std::span<const double> nonzero_at(std::string_view id) const {
    const auto v = at(id);
    if (norm(v) == 0.0) throw Error(ErrorKind::kZeroNorm, "identifier '" + std::string(id) + "' has a zero-norm embedding");
    return v;
  }

  const std::string& id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }

  const SourceMeta& meta() const { return meta_; }
  SourceMeta& meta() { return meta_; }

  /// Applies `fn(in, out)` to every row, producing a new table with the
  /// same identifiers and metadata.
  template <typename Fn>
  EmbeddingTable transform(Fn&& fn) const {
    EmbeddingTable out(dimension_);
    out.meta_ = meta_;
    Vector buffer(dimension_);
    for (std::size_t i = 0; i < size(); ++i) {
      fn(row(i), std::span<double>(buffer));
      out.add(ids_[i], buffer);
    }
    return out;
  }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dimension_ == b.dimension_ && a.ids_ == b.ids_ && a.data_ == b.data_;
  }

 private:
  std::size_t dimension_;
  std::vector<std::string> ids_;
  std::vector<double> data_;
  std::map<std::string, std::size_t, std::less<>> index_;
  SourceMeta meta_;
};

/// Element-wise mean or sum of the token vectors.
inline Vector compose(const EmbeddingTable& table, std::span<const std::string> tokens, CompositionMode mode) {
  if (tokens.empty()) throw Error(ErrorKind::kInvalidArgument, "cannot compose an empty token list");
  RowAccumulator acc(table.dimension());
  for (const auto& token : tokens) acc.add(table.at(token));
  return mode == CompositionMode::kAverage ? acc.mean() : acc.sum();
}

inline Vector compose(const EmbeddingTable& table, std::initializer_list<std::string> tokens, CompositionMode mode) {
  const std::vector<std::string> list(tokens);
  return compose(table, std::span<const std::string>(list), mode);
}

// ---------------------------------------------------------------------------
// Loaders
// ---------------------------------------------------------------------------

struct LoadOptions {
  bool lowercase = false;
  PrefixMap prefixes;
};

enum class EmbeddingFormat { kAuto, kWord2VecText, kWord2VecBinary, kGlove, kTsv };

inline std::string_view to_string(EmbeddingFormat format) {
  switch (format) {
    case EmbeddingFormat::kAuto: return "auto";
    case EmbeddingFormat::kWord2VecText: return "word2vec-text";
    case EmbeddingFormat::kWord2VecBinary: return "word2vec-binary";
    case EmbeddingFormat::kGlove: return "glove";
    case EmbeddingFormat::kTsv: return "tsv";
  }
  return "unknown";
}

inline EmbeddingFormat parse_embedding_format(std::string_view s) {
  if (s == "auto") return EmbeddingFormat::kAuto;
  if (s == "word2vec-text" || s == "w2v-text" || s == "text") return EmbeddingFormat::kWord2VecText;
  if (s == "word2vec-binary" || s == "w2v-bin" || s == "bin" || s == "binary") return EmbeddingFormat::kWord2VecBinary;
  if (s == "glove") return EmbeddingFormat::kGlove;
  if (s == "tsv") return EmbeddingFormat::kTsv;
  throw Error(ErrorKind::kInvalidArgument, "unknown embedding format '" + std::string(s) + "'");
}

namespace detail {

inline std::string canonical_id(std::string_view raw, const LoadOptions& options) {
  std::string id = options.lowercase ? to_lower(raw) : std::string(raw);
  return options.prefixes.empty() ? id : options.prefixes.expand(id);
}

inline void stamp(EmbeddingTable& table, EmbeddingFormat format, const std::filesystem::path& path,
                  const LoadOptions& options) {
  table.meta().format = std::string(to_string(format));
  table.meta().path = path.string();
  table.meta().lowercased = options.lowercase;
}

inline std::size_t parse_row_values(std::span<const std::string_view> fields, Vector& out, const std::string& token,
                                    std::size_t line) {
  out.resize(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto value = parse_double(fields[i]);
    if (!value) {
      // from_chars accepts "nan"/"inf"; anything else unparsable is malformed.
      throw Error(ErrorKind::kMalformedLine,
                  "cannot parse value '" + std::string(fields[i]) + "' in row '" + token + "'", line);
    }
    out[i] = *value;
  }
  return fields.size();
}

/// Shared body of the headerless text loaders (GloVe and TSV).
inline EmbeddingTable load_headerless(const std::filesystem::path& path, const LoadOptions& options, bool tsv) {
  auto in = open_input(path);
  std::optional<EmbeddingTable> table;
  std::string line;
  std::size_t line_no = 0;
  Vector values;
  while (read_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string_view> fields;
    if (tsv) {
      auto body = std::string_view(line);
      while (!body.empty() && (body.back() == '\t' || body.back() == ' ')) body.remove_suffix(1);
      fields = split(body, '\t');
    } else {
      fields = split_ws(line);
    }
    if (fields.size() < 2) {
      throw Error(ErrorKind::kRowArity, "row needs an identifier and at least one value", line_no);
    }
    const std::string token(trim(fields[0]));
    parse_row_values(std::span(fields).subspan(1), values, token, line_no);
    if (!table) table.emplace(values.size());
    table->add(canonical_id(token, options), values, line_no);
  }
  if (!table) throw Error(ErrorKind::kEmptyInput, "no embedding rows in '" + path.string() + "'");
  return std::move(*table);
}

}  // namespace detail

/// word2vec text: a `<count> <dim>` header, then `<token> <dim floats>` rows.
inline EmbeddingTable load_word2vec_text(const std::filesystem::path& path, const LoadOptions& options = {}) {
  auto in = detail::open_input(path);
  std::string line;
  if (!detail::read_line(in, line)) throw Error(ErrorKind::kEmptyInput, "empty file '" + path.string() + "'");
  const auto header = detail::split_ws(line);
  const auto count = header.size() == 2 ? detail::parse_int<std::size_t>(header[0]) : std::nullopt;
  const auto dim = header.size() == 2 ? detail::parse_int<std::size_t>(header[1]) : std::nullopt;
  if (!count || !dim || *dim == 0) {
    throw Error(ErrorKind::kMalformedHeader, "expected '<count> <dim>' header, got '" + line + "'", 1);
  }
  EmbeddingTable table(*dim);
  std::size_t line_no = 1;
  Vector values;
  while (detail::read_line(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_ws(line);
    const std::string token(fields[0]);
    if (table.size() == *count) {
      throw Error(ErrorKind::kCountMismatch,
                  "header declares " + std::to_string(*count) + " rows but more follow (row '" + token + "')",
                  line_no);
    }
    if (fields.size() - 1 != *dim) {
      throw Error(ErrorKind::kRowArity,
                  "row '" + token + "' has " + std::to_string(fields.size() - 1) + " values, declared dimension is " +
                      std::to_string(*dim),
                  line_no);
    }
    detail::parse_row_values(std::span(fields).subspan(1), values, token, line_no);
    table.add(detail::canonical_id(token, options), values, line_no);
  }
  if (table.size() != *count) {
    throw Error(ErrorKind::kCountMismatch, "header declares " + std::to_string(*count) + " rows, found " +
                                               std::to_string(table.size()));
  }
  detail::stamp(table, EmbeddingFormat::kWord2VecText, path, options);
  return table;
}

/// word2vec binary: ASCII `<count> <dim>\n`, then per record the token, one
/// 0x20 byte, `dim` little-endian float32 values and an optional 0x0A.
inline EmbeddingTable load_word2vec_binary(const std::filesystem::path& path, const LoadOptions& options = {}) {
  const std::string bytes = detail::read_file(path);
  const auto newline = bytes.find('\n');
  if (newline == std::string::npos) throw Error(ErrorKind::kMalformedHeader, "missing header line", 1);
  const auto header = detail::split_ws(std::string_view(bytes).substr(0, newline));
  const auto count = header.size() == 2 ? detail::parse_int<std::size_t>(header[0]) : std::nullopt;
  const auto dim = header.size() == 2 ? detail::parse_int<std::size_t>(header[1]) : std::nullopt;
  if (!count || !dim || *dim == 0) {
    throw Error(ErrorKind::kMalformedHeader, "expected '<count> <dim>' header", 1);
  }
  EmbeddingTable table(*dim);
  std::size_t pos = newline + 1;
  const std::size_t vector_bytes = *dim * sizeof(float);
  Vector values(*dim);
  for (std::size_t record = 0; record < *count; ++record) {
    if (pos < bytes.size() && bytes[pos] == '\n') ++pos;
    const auto space = bytes.find(' ', pos);
    if (space == std::string::npos) {
      throw Error(ErrorKind::kTruncated, "file ends before record " + std::to_string(record + 1) + " of " +
                                             std::to_string(*count));
    }
    std::string token = bytes.substr(pos, space - pos);
    if (token.empty() || token.find('\n') != std::string::npos) {
      throw Error(ErrorKind::kInvalidToken, "record " + std::to_string(record + 1) + " has an invalid token");
    }
    pos = space + 1;
    if (bytes.size() - pos < vector_bytes) {
      throw Error(ErrorKind::kTruncated, "vector of token '" + token + "' is truncated (record " +
                                             std::to_string(record + 1) + ")");
    }
    for (std::size_t i = 0; i < *dim; ++i) {
      std::uint32_t raw;
      std::memcpy(&raw, bytes.data() + pos + i * sizeof(float), sizeof(raw));
      if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap32(raw);
      values[i] = static_cast<double>(std::bit_cast<float>(raw));
      if (!std::isfinite(values[i])) {
        throw Error(ErrorKind::kNonFinite, "non-finite value in vector of token '" + token + "'");
      }
    }
    pos += vector_bytes;
    try {
      table.add(detail::canonical_id(token, options), values);
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " (record " + std::to_string(record + 1) + ")");
    }
  }
  if (pos < bytes.size() && bytes[pos] == '\n') ++pos;
  if (pos != bytes.size()) {
    throw Error(ErrorKind::kTrailingData, std::to_string(bytes.size() - pos) +
                                              " bytes follow the last declared record (a token may contain a space)");
  }
  detail::stamp(table, EmbeddingFormat::kWord2VecBinary, path, options);
  return table;
}

/// GloVe: headerless `<token> <floats>` rows; dimension from the first row.
inline EmbeddingTable load_glove_text(const std::filesystem::path& path, const LoadOptions& options = {}) {
  auto table = detail::load_headerless(path, options, false);
  detail::stamp(table, EmbeddingFormat::kGlove, path, options);
  return table;
}

/// Tab-separated, identifier first; identifiers may contain spaces.
inline EmbeddingTable load_tsv(const std::filesystem::path& path, const LoadOptions& options = {}) {
  auto table = detail::load_headerless(path, options, true);
  detail::stamp(table, EmbeddingFormat::kTsv, path, options);
  return table;
}

/// Picks a loader from the extension, sniffing the first line for text files.
inline EmbeddingFormat detect_embedding_format(const std::filesystem::path& path) {
  const auto ext = detail::to_lower(path.extension().string());
  if (ext == ".bin") return EmbeddingFormat::kWord2VecBinary;
  if (ext == ".tsv") return EmbeddingFormat::kTsv;
  auto in = detail::open_input(path);
  std::string line;
  if (!detail::read_line(in, line)) return EmbeddingFormat::kGlove;
  const auto fields = detail::split_ws(line);
  if (fields.size() == 2 && detail::parse_int<std::size_t>(fields[0]) && detail::parse_int<std::size_t>(fields[1])) {
    return EmbeddingFormat::kWord2VecText;
  }
  return EmbeddingFormat::kGlove;
}

inline EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format = EmbeddingFormat::kAuto,
                                      const LoadOptions& options = {}) {
  if (format == EmbeddingFormat::kAuto) format = detect_embedding_format(path);
  switch (format) {
    case EmbeddingFormat::kWord2VecText: return load_word2vec_text(path, options);
    case EmbeddingFormat::kWord2VecBinary: return load_word2vec_binary(path, options);
    case EmbeddingFormat::kGlove: return load_glove_text(path, options);
    case EmbeddingFormat::kTsv: return load_tsv(path, options);
    case EmbeddingFormat::kAuto: break;
  }
  throw Error(ErrorKind::kInvalidArgument, "unresolved embedding format");
}

// ---------------------------------------------------------------------------
// Writers
// ---------------------------------------------------------------------------

namespace detail {
inline void check_writable_token(const std::string& id) {
  if (id.find_first_of(" \t\n\r") != std::string::npos) {
    throw Error(ErrorKind::kInvalidToken, "identifier '" + id + "' contains whitespace");
  }
}
}  // namespace detail

/// Values are written in shortest round-trip form, so text round-trips exactly.
inline void write_word2vec_text(const EmbeddingTable& table, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  out << table.size() << ' ' << table.dimension() << '\n';
  for (std::size_t i = 0; i < table.size(); ++i) {
    detail::check_writable_token(table.id(i));
    out << table.id(i);
    for (const double x : table.row(i)) out << ' ' << detail::format_double(x);
    out << '\n';
  }
  detail::finish_output(out, path);
}

/// Values are narrowed to float32.
inline void write_word2vec_binary(const EmbeddingTable& table, const std::filesystem::path& path) {
  auto out = detail::open_output(path, true);
  out << table.size() << ' ' << table.dimension() << '\n';
  std::string buffer(table.dimension() * sizeof(float), '\0');
  for (std::size_t i = 0; i < table.size(); ++i) {
    detail::check_writable_token(table.id(i));
    out << table.id(i) << ' ';
    const auto row = table.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      auto raw = std::bit_cast<std::uint32_t>(static_cast<float>(row[j]));
      if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap32(raw);
      std::memcpy(buffer.data() + j * sizeof(float), &raw, sizeof(raw));
    }
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    out << '\n';
  }
  detail::finish_output(out, path);
}

// ---------------------------------------------------------------------------
// Label composition
// ---------------------------------------------------------------------------

/// Pre-tokenized labels: identifier -> tokens.
struct LabelEntry {
  std::string id;
  std::vector<std::string> tokens;
};

/// Reads `identifier TAB token token ...` lines.
inline std::vector<LabelEntry> load_labels(const std::filesystem::path& path, const LoadOptions& options = {}) {
  std::vector<LabelEntry> out;
  auto in = detail::open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (detail::read_line(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tab = body.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorKind::kMalformedLine, "expected 'identifier TAB tokens'", line_no);
    }
    LabelEntry entry;
    entry.id = options.prefixes.empty() ? std::string(body.substr(0, tab))
                                        : options.prefixes.expand(body.substr(0, tab));
    for (const auto token : detail::split_ws(body.substr(tab + 1))) {
      entry.tokens.push_back(options.lowercase ? detail::to_lower(token) : std::string(token));
    }
    if (entry.tokens.empty()) throw Error(ErrorKind::kMalformedLine, "label has no tokens", line_no);
    out.push_back(std::move(entry));
  }
  return out;
}

struct ComposedTable {
  EmbeddingTable table;
  std::vector<std::string> skipped;  // labels with at least one unknown token
};

/// Builds identifier embeddings from word embeddings of their label tokens.
inline ComposedTable compose_labels(const EmbeddingTable& words, std::span<const LabelEntry> labels,
                                    CompositionMode mode) {
  ComposedTable result{EmbeddingTable(words.dimension()), {}};
  for (const auto& entry : labels) {
    const bool resolvable = std::all_of(entry.tokens.begin(), entry.tokens.end(),
                                        [&](const std::string& t) { return words.contains(t); });
    if (!resolvable) {
      result.skipped.push_back(entry.id);
      continue;
    }
    result.table.add(entry.id, compose(words, std::span<const std::string>(entry.tokens), mode));
  }
  result.table.meta() = words.meta();
  result.table.meta().composition = std::string(to_string(mode));
  return result;
}

}  // namespace concept_eval

#endif  // CONCEPT_EVAL_EMBEDDING_HPP
