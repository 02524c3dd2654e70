#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/ml/decision_tree.hpp"

namespace vdo::ml {

struct ForestParams {
  std::size_t num_trees = 320;
  std::size_t features_per_split = 1;
  std::size_t min_leaf = 1;
  double bag_fraction = 1.0;
};

struct ForestModel {
  std::vector<Label> classes;
  std::size_t num_columns = 0;
  std::uint64_t seed = 123;
  std::vector<TreeModel> trees;
};

/// Trees are built in parallel; tree t draws its bootstrap and features from
/// the stream (seed, "forest-tree", t).
ForestModel forest_train(const FeatureMatrix& x, std::span<const Label> y, const ForestParams& params,
                         std::uint64_t seed);

std::vector<double> forest_votes(const ForestModel& forest, const SparseVector& x);

/// Plurality of tree votes. Ties are broken at random by a stream keyed on the
/// forest seed and the input, so prediction stays a pure function.
Label forest_predict(const ForestModel& forest, const SparseVector& x);

}  // namespace vdo::ml
