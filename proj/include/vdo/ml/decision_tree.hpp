#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/rng.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::ml {

/// Entropy in bits of a class histogram.
double entropy_bits(std::span<const double> class_weights);

/// Gain ratio of the binary split `value <= threshold`. Requires at least one
/// sample per side (throws InvalidArgument otherwise); a zero split
/// information gives 0.
double gain_ratio(std::span<const double> values, double threshold, std::span<const Label> y);

struct SplitCandidate {
  std::uint32_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
  double ratio = 0.0;
};

/// Best midpoint threshold on one numeric column by information gain, or
/// nullopt when fewer than two distinct values (or no split honouring
/// min_leaf) exist. The returned candidate carries that threshold's gain ratio.
std::optional<SplitCandidate> best_threshold(std::span<const double> values, std::span<const Label> y,
                                             std::size_t min_leaf = 1);

/// C4.5 attribute choice: among candidates with positive gain at least the
/// average positive gain, the highest gain ratio (lowest feature on ties).
/// Without any positive gain the first candidate is returned.
std::optional<SplitCandidate> choose_split(std::span<const SplitCandidate> candidates);

struct TreeNode {
  // Internal nodes: feature/threshold and children; leaves: child ids are -1.
  std::uint32_t feature = 0;
  double threshold = 0.0;
  std::int32_t left = -1;   // value <= threshold
  std::int32_t right = -1;  // value > threshold
  std::uint32_t leaf_class = 0;
  std::vector<double> class_weights;  // training histogram at this node

  bool is_leaf() const noexcept { return left < 0; }
};

struct TreeModel {
  std::vector<Label> classes;
  std::size_t num_columns = 0;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t num_leaves() const;
  std::size_t depth() const;
};

struct TreeParams {
  double confidence = 0.4;
  std::size_t min_leaf = 0;  // clamped to 1 when training
  bool prune = true;
};

TreeModel train_decision_tree(const FeatureMatrix& x, std::span<const Label> y, const TreeParams& params);

/// Random tree used inside the forest: trains on `sample` (row ids, repeats
/// allowed), considers random features at each node until `features_per_split`
/// have been evaluated and one has positive gain. Never pruned.
TreeModel train_random_tree(const FeatureMatrix& x, std::span<const Label> y, std::span<const Label> classes,
                            std::span<const std::size_t> sample, std::size_t features_per_split,
                            std::size_t min_leaf, RngStream& rng);

/// Index of the leaf reached by x.
std::size_t find_leaf(const TreeModel& tree, const SparseVector& x);
Label predict(const TreeModel& tree, const SparseVector& x);

/// Upper confidence bound on the errors at a leaf holding `n` weight with
/// `errors` misclassified, minus the observed errors (C4.5 pessimistic estimate).
double pessimistic_extra_errors(double n, double errors, double confidence);

}  // namespace vdo::ml
