#include "vdo/ml/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "vdo/error.hpp"
#include "vdo/ml/dataset.hpp"
#include "vdo/stats/distributions.hpp"

namespace vdo::ml {
namespace {

constexpr double kMinGain = 1e-12;

double entropy_of(const std::vector<double>& hist, double n) {
  if (n <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : hist) {
    if (w > 0.0) {
      const double p = w / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double split_info(double left, double right) {
  const double n = left + right;
  double s = 0.0;
  for (double part : {left, right}) {
    if (part > 0.0) s -= part / n * std::log2(part / n);
  }
  return s;
}

// One feature's samples in ascending value order. A leading block of
// implicit zeros is carried as a histogram.
struct SortedColumn {
  std::uint32_t feature = 0;
  std::vector<double> zero_hist;
  double zero_count = 0.0;
  std::vector<std::pair<double, std::uint32_t>> nonzero;  // (value, class), sorted
};

std::optional<SplitCandidate> sweep(const SortedColumn& col, const std::vector<double>& parent_hist, double n,
                                    double min_leaf) {
  const double parent_h = entropy_of(parent_hist, n);
  std::vector<double> left(parent_hist.size(), 0.0);
  double left_n = 0.0;
  bool have_prev = false;
  double prev = 0.0;
  std::optional<SplitCandidate> best;

  auto consider = [&](double next_value) {
    const double right_n = n - left_n;
    if (left_n < min_leaf || right_n < min_leaf) return;
    std::vector<double> right(parent_hist.size());
    for (std::size_t c = 0; c < right.size(); ++c) right[c] = parent_hist[c] - left[c];
    const double gain = parent_h - (left_n / n) * entropy_of(left, left_n) - (right_n / n) * entropy_of(right, right_n);
    if (!best || gain > best->gain + 1e-15) {
      const double si = split_info(left_n, right_n);
      best = SplitCandidate{col.feature, (prev + next_value) / 2.0, gain, si > 0.0 ? gain / si : 0.0};
    }
  };

  if (col.zero_count > 0.0) {
    for (std::size_t c = 0; c < left.size(); ++c) left[c] += col.zero_hist[c];
    left_n += col.zero_count;
    have_prev = true;
    prev = 0.0;
  }
  for (const auto& [value, cls] : col.nonzero) {
    if (have_prev && value > prev) consider(value);
    left[cls] += 1.0;
    left_n += 1.0;
    have_prev = true;
    prev = value;
  }
  return best;
}

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, std::vector<std::uint32_t> cls, std::size_t num_classes, std::size_t min_leaf)
      : x_(x), cls_(std::move(cls)), k_(num_classes), min_leaf_(static_cast<double>(min_leaf)) {}

  // features_per_split == 0 evaluates every feature (plain C4.5).
  std::vector<TreeNode> build(std::vector<std::size_t> rows, std::size_t features_per_split, RngStream* rng) {
    features_per_split_ = features_per_split;
    rng_ = rng;
    nodes_.clear();
    grow(std::move(rows));
    return std::move(nodes_);
  }

 private:
  std::int32_t grow(std::vector<std::size_t> rows) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    std::vector<double> hist(k_, 0.0);
    for (auto r : rows) hist[cls_[r]] += 1.0;
    nodes_[id].class_weights = hist;
    nodes_[id].leaf_class = static_cast<std::uint32_t>(argmax_lowest(hist));

    const double n = static_cast<double>(rows.size());
    const auto nonempty = std::count_if(hist.begin(), hist.end(), [](double w) { return w > 0.0; });
    if (nonempty <= 1 || n < 2.0 * min_leaf_) return id;

    auto split = find_split(rows, hist, n);
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (value_at(x_.rows[r], split->feature) <= split->threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[id].feature = split->feature;
    nodes_[id].threshold = split->threshold;
    const auto l = grow(std::move(left));
    nodes_[id].left = l;
    const auto r = grow(std::move(right));
    nodes_[id].right = r;
    return id;
  }

  std::vector<SortedColumn> active_columns(const std::vector<std::size_t>& rows, const std::vector<double>& hist,
                                           double n) const {
    struct Triple {
      std::uint32_t col;
      double value;
      std::uint32_t cls;
    };
    std::vector<Triple> triples;
    for (auto r : rows) {
      for (const auto& e : x_.rows[r]) triples.push_back({e.column, e.value, cls_[r]});
    }
    std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
      return a.col != b.col ? a.col < b.col : a.value != b.value ? a.value < b.value : a.cls < b.cls;
    });
    std::vector<SortedColumn> cols;
    for (std::size_t i = 0; i < triples.size();) {
      SortedColumn col;
      col.feature = triples[i].col;
      std::vector<double> nz_hist(k_, 0.0);
      std::size_t j = i;
      for (; j < triples.size() && triples[j].col == col.feature; ++j) {
        col.nonzero.emplace_back(triples[j].value, triples[j].cls);
        nz_hist[triples[j].cls] += 1.0;
      }
      col.zero_count = n - static_cast<double>(j - i);
      col.zero_hist.resize(k_);
      for (std::size_t c = 0; c < k_; ++c) col.zero_hist[c] = hist[c] - nz_hist[c];
      cols.push_back(std::move(col));
      i = j;
    }
    return cols;
  }

  std::optional<SplitCandidate> find_split(const std::vector<std::size_t>& rows, const std::vector<double>& hist,
                                           double n) {
    auto cols = active_columns(rows, hist, n);
    std::vector<SplitCandidate> candidates;
    if (features_per_split_ == 0 || !rng_) {
      for (const auto& col : cols) {
        if (auto c = sweep(col, hist, n, min_leaf_)) candidates.push_back(*c);
      }
      return choose_split(candidates);
    }
    std::vector<std::size_t> order(cols.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng_->shuffle(order.begin(), order.end());
    bool positive = false;
    for (std::size_t evaluated = 0; evaluated < order.size(); ++evaluated) {
      if (evaluated >= features_per_split_ && positive) break;
      if (auto c = sweep(cols[order[evaluated]], hist, n, min_leaf_)) {
        positive = positive || c->gain > kMinGain;
        candidates.push_back(*c);
      }
    }
    return choose_split(candidates);
  }

  const FeatureMatrix& x_;
  std::vector<std::uint32_t> cls_;
  std::size_t k_;
  double min_leaf_;
  std::size_t features_per_split_ = 0;
  RngStream* rng_ = nullptr;
  std::vector<TreeNode> nodes_;
};

double leaf_errors(const TreeNode& node) {
  double n = 0.0;
  for (double w : node.class_weights) n += w;
  return n - node.class_weights[node.leaf_class];
}

double node_weight(const TreeNode& node) {
  double n = 0.0;
  for (double w : node.class_weights) n += w;
  return n;
}

// Returns the pessimistic error estimate of the (possibly pruned) subtree.
double prune(std::vector<TreeNode>& nodes, std::int32_t id, double cf) {
  auto& node = nodes[id];
  const double n = node_weight(node);
  const double e_leaf = leaf_errors(node);
  const double as_leaf = e_leaf + pessimistic_extra_errors(n, e_leaf, cf);
  if (node.is_leaf()) return as_leaf;
  const double as_tree = prune(nodes, node.left, cf) + prune(nodes, nodes[id].right, cf);
  if (as_leaf <= as_tree + 0.1) {
    nodes[id].left = nodes[id].right = -1;
    return as_leaf;
  }
  return as_tree;
}

std::vector<TreeNode> compact(const std::vector<TreeNode>& nodes) {
  std::vector<TreeNode> out;
  std::function<std::int32_t(std::int32_t)> copy = [&](std::int32_t id) {
    const auto nid = static_cast<std::int32_t>(out.size());
    out.push_back(nodes[id]);
    if (!nodes[id].is_leaf()) {
      const auto l = copy(nodes[id].left);
      out[nid].left = l;
      const auto r = copy(nodes[id].right);
      out[nid].right = r;
    }
    return nid;
  };
  copy(0);
  return out;
}

}  // namespace

double entropy_bits(std::span<const double> class_weights) {
  double n = 0.0;
  for (double w : class_weights) n += w;
  return entropy_of(std::vector<double>(class_weights.begin(), class_weights.end()), n);
}

double gain_ratio(std::span<const double> values, double threshold, std::span<const Label> y) {
  if (values.size() != y.size()) throw InvalidArgument("gain_ratio: size mismatch");
  const auto classes = distinct_classes(y);
  const auto idx = class_indices(y, classes);
  std::vector<double> all(classes.size(), 0.0), left(classes.size(), 0.0), right(classes.size(), 0.0);
  double nl = 0.0, nr = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    all[idx[i]] += 1.0;
    if (values[i] <= threshold) {
      left[idx[i]] += 1.0;
      nl += 1.0;
    } else {
      right[idx[i]] += 1.0;
      nr += 1.0;
    }
  }
  if (nl == 0.0 || nr == 0.0) throw InvalidArgument("gain_ratio: threshold leaves one side empty");
  const double n = nl + nr;
  const double gain = entropy_of(all, n) - nl / n * entropy_of(left, nl) - nr / n * entropy_of(right, nr);
  const double si = split_info(nl, nr);
  return si > 0.0 ? gain / si : 0.0;
}

std::optional<SplitCandidate> best_threshold(std::span<const double> values, std::span<const Label> y,
                                             std::size_t min_leaf) {
  if (values.size() != y.size()) throw InvalidArgument("best_threshold: size mismatch");
  const auto classes = distinct_classes(y);
  const auto idx = class_indices(y, classes);
  SortedColumn col;
  col.zero_hist.assign(classes.size(), 0.0);
  std::vector<double> hist(classes.size(), 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    col.nonzero.emplace_back(values[i], static_cast<std::uint32_t>(idx[i]));
    hist[idx[i]] += 1.0;
  }
  std::sort(col.nonzero.begin(), col.nonzero.end());
  return sweep(col, hist, static_cast<double>(values.size()), static_cast<double>(std::max<std::size_t>(1, min_leaf)));
}

std::optional<SplitCandidate> choose_split(std::span<const SplitCandidate> candidates) {
  if (candidates.empty()) return std::nullopt;
  double sum = 0.0;
  std::size_t positive = 0;
  for (const auto& c : candidates) {
    if (c.gain > kMinGain) {
      sum += c.gain;
      ++positive;
    }
  }
  if (positive == 0) return candidates.front();
  const double average = sum / static_cast<double>(positive);
  const SplitCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (c.gain <= kMinGain || c.gain < average - 1e-12) continue;
    if (!best || c.ratio > best->ratio || (c.ratio == best->ratio && c.feature < best->feature)) best = &c;
  }
  return *best;
}

double pessimistic_extra_errors(double n, double e, double cf) {
  if (n <= 0.0) return 0.0;
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(cf, 1.0 / n));
    if (e == 0.0) return base;
    return base + e * (pessimistic_extra_errors(n, 1.0, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = stats::normal_quantile(1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r = (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) / (1.0 + z * z / n);
  return r * n - e;
}

std::size_t TreeModel::num_leaves() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t TreeModel::depth() const {
  std::function<std::size_t(std::int32_t)> d = [&](std::int32_t id) -> std::size_t {
    if (nodes[id].is_leaf()) return 0;
    return 1 + std::max(d(nodes[id].left), d(nodes[id].right));
  };
  return nodes.empty() ? 0 : d(0);
}

TreeModel train_decision_tree(const FeatureMatrix& x, std::span<const Label> y, const TreeParams& params) {
  if (x.rows.size() != y.size()) throw InvalidArgument("decision tree: row/label count mismatch");
  if (y.empty()) throw InvalidArgument("decision tree: no training rows");
  if (!(params.confidence > 0.0 && params.confidence <= 0.5)) {
    throw InvalidArgument("decision tree: confidence must be in (0, 0.5]");
  }
  TreeModel tree;
  tree.classes = distinct_classes(y);
  tree.num_columns = x.num_columns;
  const auto idx = class_indices(y, tree.classes);
  std::vector<std::uint32_t> cls(idx.begin(), idx.end());
  std::vector<std::size_t> rows(y.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  TreeBuilder builder(x, std::move(cls), tree.classes.size(), std::max<std::size_t>(1, params.min_leaf));
  tree.nodes = builder.build(std::move(rows), 0, nullptr);
  if (params.prune) {
    prune(tree.nodes, 0, params.confidence);
    tree.nodes = compact(tree.nodes);
  }
  return tree;
}

TreeModel train_random_tree(const FeatureMatrix& x, std::span<const Label> y, std::span<const Label> classes,
                            std::span<const std::size_t> sample, std::size_t features_per_split,
                            std::size_t min_leaf, RngStream& rng) {
  TreeModel tree;
  tree.classes.assign(classes.begin(), classes.end());
  tree.num_columns = x.num_columns;
  const auto idx = class_indices(y, tree.classes);
  std::vector<std::uint32_t> cls(idx.begin(), idx.end());
  TreeBuilder builder(x, std::move(cls), tree.classes.size(), std::max<std::size_t>(1, min_leaf));
  tree.nodes = builder.build(std::vector<std::size_t>(sample.begin(), sample.end()),
                             std::max<std::size_t>(1, features_per_split), &rng);
  return tree;
}

std::size_t find_leaf(const TreeModel& tree, const SparseVector& x) {
  std::size_t id = 0;
  while (!tree.nodes[id].is_leaf()) {
    const auto& n = tree.nodes[id];
    id = static_cast<std::size_t>(value_at(x, n.feature) <= n.threshold ? n.left : n.right);
  }
  return id;
}

Label predict(const TreeModel& tree, const SparseVector& x) {
  return tree.classes[tree.nodes[find_leaf(tree, x)].leaf_class];
}

}  // namespace vdo::ml
