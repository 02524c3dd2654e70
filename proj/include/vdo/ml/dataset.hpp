#pragma once

#include <span>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::ml {

/// The two views every learner may draw from: TF-IDF weights and raw term
/// counts over the same rows and columns.
struct FeatureSet {
  FeatureMatrix weights;
  FeatureMatrix counts;

  /// Both views backed by the same matrix (numeric toy data, tests).
  static FeatureSet single(FeatureMatrix m) { return {m, m}; }

  std::size_t num_rows() const noexcept { return weights.rows.size(); }
  std::size_t num_columns() const noexcept { return weights.num_columns; }
};

struct RowView {
  const SparseVector& weights;
  const SparseVector& counts;

  static RowView single(const SparseVector& v) { return {v, v}; }
};

inline RowView row(const FeatureSet& set, std::size_t i) { return {set.weights.rows[i], set.counts.rows[i]}; }

/// Distinct labels in taxonomy order.
std::vector<Label> distinct_classes(std::span<const Label> y);

/// Position of each label in `classes` (which must contain them all).
std::vector<std::size_t> class_indices(std::span<const Label> y, std::span<const Label> classes);

/// Index of the maximum; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> v);

}  // namespace vdo::ml
