#include "vdo/ml/random_forest.hpp"

#include <cmath>
#include <cstring>

#include "vdo/error.hpp"
#include "vdo/ml/dataset.hpp"
#include "vdo/parallel.hpp"

namespace vdo::ml {
namespace {

std::uint64_t hash_input(const SparseVector& x) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (const auto& e : x) {
    std::uint64_t bits;
    std::memcpy(&bits, &e.value, sizeof bits);
    h = mix64(h ^ e.column);
    h = mix64(h ^ bits);
  }
  return h;
}

}  // namespace

ForestModel forest_train(const FeatureMatrix& x, std::span<const Label> y, const ForestParams& params,
                         std::uint64_t seed) {
  if (x.rows.size() != y.size()) throw InvalidArgument("random forest: row/label count mismatch");
  if (y.empty()) throw InvalidArgument("random forest: no training rows");
  if (params.num_trees < 1) throw InvalidArgument("random forest: num_trees must be >= 1");
  if (params.features_per_split < 1) throw InvalidArgument("random forest: features_per_split must be >= 1");
  if (!(params.bag_fraction > 0.0 && params.bag_fraction <= 1.0)) {
    throw InvalidArgument("random forest: bag_fraction must be in (0, 1]");
  }

  ForestModel forest;
  forest.classes = distinct_classes(y);
  forest.num_columns = x.num_columns;
  forest.seed = seed;
  forest.trees.resize(params.num_trees);

  const auto n = y.size();
  const auto bag = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.bag_fraction * n)));
  parallel_for(params.num_trees, [&](std::size_t t) {
    RngStream rng(seed, "forest-tree", t);
    std::vector<std::size_t> sample(bag);
    for (auto& s : sample) s = static_cast<std::size_t>(rng.below(n));
    forest.trees[t] = train_random_tree(x, y, forest.classes, sample, params.features_per_split, params.min_leaf, rng);
  });
  return forest;
}

std::vector<double> forest_votes(const ForestModel& forest, const SparseVector& x) {
  std::vector<double> votes(forest.classes.size(), 0.0);
  for (const auto& tree : forest.trees) {
    votes[tree.nodes[find_leaf(tree, x)].leaf_class] += 1.0;
  }
  return votes;
}

Label forest_predict(const ForestModel& forest, const SparseVector& x) {
  const auto votes = forest_votes(forest, x);
  double top = 0.0;
  for (double v : votes) top = std::max(top, v);
  std::vector<std::size_t> tied;
  for (std::size_t c = 0; c < votes.size(); ++c) {
    if (votes[c] == top) tied.push_back(c);
  }
  if (tied.size() == 1) return forest.classes[tied.front()];
  RngStream rng(forest.seed, "forest-tie", hash_input(x));
  return forest.classes[tied[rng.below(tied.size())]];
}

}  // namespace vdo::ml
