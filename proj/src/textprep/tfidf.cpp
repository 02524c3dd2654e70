#include "vdo/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "vdo/error.hpp"

namespace vdo {

double value_at(const SparseVector& v, std::uint32_t column) noexcept {
  auto it = std::lower_bound(v.begin(), v.end(), column,
                             [](const SparseEntry& e, std::uint32_t c) { return e.column < c; });
  return it != v.end() && it->column == column ? it->value : 0.0;
}

std::size_t FeatureMatrix::nnz() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size();
  return n;
}

void check_matrix(const FeatureMatrix& m) {
  if (!m.row_labels.empty() && m.row_labels.size() != m.rows.size()) {
    throw InvalidArgument("row_labels size does not match row count");
  }
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    const auto& row = m.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].column >= m.num_columns) {
        throw InvalidArgument("row " + std::to_string(r) + ": column " + std::to_string(row[i].column) +
                              " out of range");
      }
      if (i > 0 && row[i].column <= row[i - 1].column) {
        throw InvalidArgument("row " + std::to_string(r) + ": columns not strictly increasing");
      }
      if (!std::isfinite(row[i].value) || row[i].value < 0.0) {
        throw InvalidArgument("row " + std::to_string(r) + ": weight must be finite and non-negative");
      }
    }
  }
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> doc_frequency,
                       std::size_t num_documents)
    : terms_(std::move(terms)), doc_frequency_(std::move(doc_frequency)), num_documents_(num_documents) {
  if (terms_.size() != doc_frequency_.size()) throw InvalidArgument("vocabulary: terms/df size mismatch");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (doc_frequency_[i] < 1 || doc_frequency_[i] > num_documents_) {
      throw InvalidArgument("vocabulary: document frequency out of range for \"" + terms_[i] + "\"");
    }
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second) {
      throw InvalidArgument("vocabulary: duplicate term \"" + terms_[i] + "\"");
    }
  }
}

std::optional<std::uint32_t> Vocabulary::column_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::doc_frequency(std::string_view term) const {
  auto col = column_of(term);
  return col ? doc_frequency_[*col] : 0;
}

double Vocabulary::idf(std::uint32_t column) const {
  return std::log(static_cast<double>(num_documents_) / static_cast<double>(doc_frequency_.at(column)));
}

Vocabulary build_vocabulary(std::span<const TokenList> docs) {
  Vocabulary v;
  v.num_documents_ = docs.size();
  std::vector<std::size_t> last_doc;  // per column, 1 + last doc index that counted it
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& tok : docs[d]) {
      auto [it, inserted] = v.index_.emplace(tok, static_cast<std::uint32_t>(v.terms_.size()));
      if (inserted) {
        v.terms_.push_back(tok);
        v.doc_frequency_.push_back(0);
        last_doc.push_back(0);
      }
      if (last_doc[it->second] != d + 1) {
        last_doc[it->second] = d + 1;
        ++v.doc_frequency_[it->second];
      }
    }
  }
  return v;
}

namespace {

std::map<std::uint32_t, std::size_t> term_counts(const TokenList& doc, const Vocabulary& vocab) {
  std::map<std::uint32_t, std::size_t> counts;
  for (const auto& tok : doc) {
    if (auto col = vocab.column_of(tok)) ++counts[*col];
  }
  return counts;
}

}  // namespace

SparseVector tfidf_vector(const TokenList& doc, const Vocabulary& vocab) {
  SparseVector out;
  for (const auto& [col, tf] : term_counts(doc, vocab)) {
    const double w = std::log1p(static_cast<double>(tf)) * vocab.idf(col);
    if (w > 0.0) out.push_back({col, w});
  }
  return out;
}

SparseVector count_vector(const TokenList& doc, const Vocabulary& vocab) {
  SparseVector out;
  for (const auto& [col, tf] : term_counts(doc, vocab)) out.push_back({col, static_cast<double>(tf)});
  return out;
}

FeatureMatrix tfidf_transform(std::span<const TokenList> docs, const Vocabulary& vocab) {
  FeatureMatrix m;
  m.num_columns = vocab.size();
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(tfidf_vector(d, vocab));
  return m;
}

FeatureMatrix count_transform(std::span<const TokenList> docs, const Vocabulary& vocab) {
  FeatureMatrix m;
  m.num_columns = vocab.size();
  m.rows.reserve(docs.size());
  for (const auto& d : docs) m.rows.push_back(count_vector(d, vocab));
  return m;
}

void write_matrix(std::ostream& out, const FeatureMatrix& m) {
  out << m.num_rows() << ' ' << m.num_columns << ' ' << m.nnz() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    for (const auto& e : m.rows[r]) {
      std::snprintf(buf, sizeof buf, "%.10g", e.value);
      out << r << ' ' << e.column << ' ' << buf << '\n';
    }
  }
}

FeatureMatrix read_matrix(std::istream& in) {
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz)) throw ParseError(1, "expected header \"rows cols nnz\"");
  FeatureMatrix m;
  m.rows.resize(rows);
  m.num_columns = cols;
  for (std::size_t i = 0; i < nnz; ++i) {
    std::size_t r = 0;
    std::uint32_t c = 0;
    double w = 0.0;
    if (!(in >> r >> c >> w)) throw ParseError(i + 2, "expected \"row col weight\"");
    if (r >= rows) throw ParseError(i + 2, "row index out of range");
    m.rows[r].push_back({c, w});
  }
  check_matrix(m);
  return m;
}

}  // namespace vdo
