#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/textprep.hpp"

namespace vdo {

struct SparseEntry {
  std::uint32_t column;
  double value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Entries sorted by strictly increasing column; stored values are nonzero.
using SparseVector = std::vector<SparseEntry>;

/// Value at `column`, 0 when absent.
double value_at(const SparseVector& v, std::uint32_t column) noexcept;

struct FeatureMatrix {
  std::vector<SparseVector> rows;
  std::size_t num_columns = 0;
  std::vector<Label> row_labels;  // empty, or one per row

  std::size_t num_rows() const noexcept { return rows.size(); }
  std::size_t nnz() const noexcept;
};

/// Checks sorted, in-range columns and finite, non-negative values.
void check_matrix(const FeatureMatrix& m);

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Restores a vocabulary from serialized parts; throws on inconsistent data.
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_frequency,
             std::size_t num_documents);

  std::size_t size() const noexcept { return terms_.size(); }
  std::size_t num_documents() const noexcept { return num_documents_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& doc_frequencies() const noexcept { return doc_frequency_; }

  std::optional<std::uint32_t> column_of(std::string_view term) const;
  std::size_t doc_frequency(std::string_view term) const;  // 0 when unknown

  /// ln(N / df) for a column.
  double idf(std::uint32_t column) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.doc_frequency_ == b.doc_frequency_ &&
           a.num_documents_ == b.num_documents_;
  }

 private:
  friend Vocabulary build_vocabulary(std::span<const TokenList> docs);

  std::vector<std::string> terms_;
  std::vector<std::size_t> doc_frequency_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t num_documents_ = 0;
};

/// Columns are assigned in first-occurrence order over docs then tokens.
Vocabulary build_vocabulary(std::span<const TokenList> docs);

/// weight = ln(1 + tf) * ln(N / df). Zero weights and unknown terms are omitted.
SparseVector tfidf_vector(const TokenList& doc, const Vocabulary& vocab);
FeatureMatrix tfidf_transform(std::span<const TokenList> docs, const Vocabulary& vocab);

/// Raw term counts over the vocabulary's columns (unknown terms dropped).
SparseVector count_vector(const TokenList& doc, const Vocabulary& vocab);
FeatureMatrix count_transform(std::span<const TokenList> docs, const Vocabulary& vocab);

/// Text dump: header "rows cols nnz", then one "row col weight" triple per
/// stored entry, weights with 10 significant digits.
void write_matrix(std::ostream& out, const FeatureMatrix& m);
FeatureMatrix read_matrix(std::istream& in);

}  // namespace vdo
