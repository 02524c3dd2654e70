#pragma once

#include <span>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/ml/smo.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::ml {

struct SvmParams {
  double c = 0.5;
  double tolerance = 1e-3;
  double epsilon = 1e-12;
  double exponent = 1.0;  // polynomial kernel degree; only 1 is supported
};

/// One-vs-one machine; f(x) >= 0 votes for `positive`.
struct BinaryMachine {
  Label positive;
  Label negative;
  SparseVector weights;  // in normalized feature space
  double bias = 0.0;

  double decision(const SparseVector& normalized_x) const noexcept;
};

struct SvmModel {
  std::vector<Label> classes;
  std::size_t num_columns = 0;
  std::vector<double> column_min;
  std::vector<double> column_range;  // 0 for constant columns
  std::vector<BinaryMachine> machines;  // pairs (i, j), i < j, row-major over classes

  /// Min-max scaling with training ranges, clamped to [0, 1].
  SparseVector normalize(const SparseVector& x) const;
};

/// Pairwise SVM. Requires >= 1 class; a single-class model has no machines
/// and always predicts that class (used for degenerate boosting resamples).
SvmModel train_svm(const FeatureMatrix& x, std::span<const Label> y, const SvmParams& params, std::uint64_t seed);

/// Per-class vote counts from the pairwise machines on a normalized input.
std::vector<double> pairwise_votes(std::span<const BinaryMachine> machines, std::span<const Label> classes,
                                   const SparseVector& normalized_x);

/// Most votes wins; ties go to the lowest label index. Throws when a pair has
/// no machine.
Label pairwise_predict(std::span<const BinaryMachine> machines, std::span<const Label> classes,
                       const SparseVector& normalized_x);

Label predict(const SvmModel& model, const SparseVector& x);

}  // namespace vdo::ml
