#include "vdo/ml/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vdo/error.hpp"

namespace vdo::ml {
namespace {

struct AlgorithmName {
  AlgorithmKind kind;
  std::string_view id;
  std::string_view display;
};

constexpr std::array<AlgorithmName, 6> kNames{{
    {AlgorithmKind::NaiveBayes, "naive_bayes", "Naive Bayes"},
    {AlgorithmKind::DecisionTree, "decision_tree", "Decision Tree"},
    {AlgorithmKind::Svm, "svm", "SVM"},
    {AlgorithmKind::RandomForest, "random_forest", "Random Forest"},
    {AlgorithmKind::AdaBoostSvm, "adaboost_svm", "AdaBoost-SVM"},
    {AlgorithmKind::MajorityVote, "majority_vote", "Majority Vote"},
}};

const SparseVector& nb_view(NbInput input, const RowView& x) {
  return input == NbInput::Counts ? x.counts : x.weights;
}

const FeatureMatrix& nb_view(NbInput input, const FeatureSet& x) {
  return input == NbInput::Counts ? x.counts : x.weights;
}

std::size_t slot(const std::vector<Label>& classes, Label l) {
  return static_cast<std::size_t>(std::lower_bound(classes.begin(), classes.end(), l) - classes.begin());
}

std::array<Label, 5> member_predictions(const VoteModel& v, const RowView& x) {
  return {predict(v.naive_bayes, nb_view(v.nb_input, x)), predict(v.svm, x.weights), predict(v.tree, x.weights),
          forest_predict(v.forest, x.weights), predict(v.boost, x.weights)};
}

void check_row(const TrainedModel& model, const RowView& x) {
  for (const auto* v : {&x.weights, &x.counts}) {
    if (!v->empty() && v->back().column >= model.num_columns) {
      throw InvalidArgument("column id " + std::to_string(v->back().column) + " out of range for a model with " +
                            std::to_string(model.num_columns) + " columns");
    }
  }
}

}  // namespace

std::string_view algorithm_id(AlgorithmKind kind) noexcept { return kNames[static_cast<std::size_t>(kind)].id; }

std::string_view algorithm_display(AlgorithmKind kind) noexcept {
  return kNames[static_cast<std::size_t>(kind)].display;
}

std::optional<AlgorithmKind> parse_algorithm(std::string_view id) noexcept {
  for (const auto& n : kNames) {
    if (n.id == id) return n.kind;
  }
  return std::nullopt;
}

void validate_spec(const AlgorithmSpec& spec) {
  auto check_svm = [](const SvmParams& p, const char* who) {
    if (!(p.c > 0.0)) throw InvalidArgument(std::string(who) + ": C must be > 0");
    if (!(p.tolerance > 0.0)) throw InvalidArgument(std::string(who) + ": tolerance must be > 0");
    if (!(p.epsilon > 0.0)) throw InvalidArgument(std::string(who) + ": epsilon must be > 0");
    if (p.exponent != 1.0) throw InvalidArgument(std::string(who) + ": only kernel exponent 1 is supported");
  };
  const bool vote = spec.kind == AlgorithmKind::MajorityVote;
  if (spec.kind == AlgorithmKind::DecisionTree || vote) {
    if (!(spec.tree.confidence > 0.0 && spec.tree.confidence <= 0.5)) {
      throw InvalidArgument("decision_tree: confidence must be in (0, 0.5]");
    }
  }
  if (spec.kind == AlgorithmKind::Svm || vote) check_svm(spec.svm, "svm");
  if (spec.kind == AlgorithmKind::RandomForest || vote) {
    if (spec.forest.num_trees < 1) throw InvalidArgument("random_forest: num_trees must be >= 1");
    if (spec.forest.features_per_split < 1) throw InvalidArgument("random_forest: features_per_split must be >= 1");
    if (!(spec.forest.bag_fraction > 0.0 && spec.forest.bag_fraction <= 1.0)) {
      throw InvalidArgument("random_forest: bag_fraction must be in (0, 1]");
    }
  }
  if (spec.kind == AlgorithmKind::AdaBoostSvm || vote) {
    if (spec.boost.iterations < 1) throw InvalidArgument("adaboost_svm: iterations must be >= 1");
    if (!(spec.boost.resample_fraction > 0.0 && spec.boost.resample_fraction <= 1.0)) {
      throw InvalidArgument("adaboost_svm: resample_fraction must be in (0, 1]");
    }
    check_svm(spec.boost.base, "adaboost_svm base");
  }
}

TrainedModel train(const AlgorithmSpec& spec, const FeatureSet& x, std::span<const Label> y) {
  validate_spec(spec);
  if (x.weights.rows.size() != y.size() || x.counts.rows.size() != y.size()) {
    throw InvalidArgument("train: " + std::to_string(x.weights.rows.size()) + " rows but " +
                          std::to_string(y.size()) + " labels");
  }
  if (x.counts.num_columns != x.weights.num_columns) throw InvalidArgument("train: feature views differ in width");
  if (y.size() < 2) throw InvalidArgument("train: at least 2 rows are required");
  check_matrix(x.weights);
  check_matrix(x.counts);
  TrainedModel model{spec.kind, distinct_classes(y), x.num_columns(), {}};
  if (model.classes.size() < 2) throw InvalidArgument("train: at least 2 distinct classes are required");

  switch (spec.kind) {
    case AlgorithmKind::NaiveBayes:
      model.state = NaiveBayesState{train_naive_bayes(nb_view(spec.naive_bayes.input, x), y), spec.naive_bayes.input};
      break;
    case AlgorithmKind::DecisionTree:
      model.state = train_decision_tree(x.weights, y, spec.tree);
      break;
    case AlgorithmKind::Svm:
      model.state = train_svm(x.weights, y, spec.svm, spec.seed);
      break;
    case AlgorithmKind::RandomForest:
      model.state = forest_train(x.weights, y, spec.forest, spec.seed);
      break;
    case AlgorithmKind::AdaBoostSvm:
      model.state = train_adaboost(x.weights, y, spec.boost, spec.seed);
      break;
    case AlgorithmKind::MajorityVote: {
      VoteModel v;
      v.nb_input = spec.naive_bayes.input;
      v.naive_bayes = train_naive_bayes(nb_view(spec.naive_bayes.input, x), y);
      v.svm = train_svm(x.weights, y, spec.svm, spec.seed);
      v.tree = train_decision_tree(x.weights, y, spec.tree);
      v.forest = forest_train(x.weights, y, spec.forest, spec.seed);
      v.boost = train_adaboost(x.weights, y, spec.boost, spec.seed);
      model.state = std::move(v);
      break;
    }
  }
  return model;
}

Label predict(const TrainedModel& model, const RowView& x) {
  check_row(model, x);
  return std::visit(
      [&](const auto& s) -> Label {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NaiveBayesState>) {
          return predict(s.model, nb_view(s.input, x));
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          return forest_predict(s, x.weights);
        } else if constexpr (std::is_same_v<T, VoteModel>) {
          const auto members = member_predictions(s, x);
          return majority_combine(members);
        } else {
          return predict(s, x.weights);
        }
      },
      model.state);
}

std::vector<double> class_scores(const TrainedModel& model, const RowView& x) {
  check_row(model, x);
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NaiveBayesState>) {
          return nb_posterior(s.model, nb_view(s.input, x));
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          return s.nodes[find_leaf(s, x.weights)].class_weights;
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          return pairwise_votes(s.machines, s.classes, s.normalize(x.weights));
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          return forest_votes(s, x.weights);
        } else if constexpr (std::is_same_v<T, BoostModel>) {
          return boost_scores(s, x.weights);
        } else {
          std::vector<double> votes(model.classes.size(), 0.0);
          for (Label l : member_predictions(s, x)) votes[slot(model.classes, l)] += 1.0;
          return votes;
        }
      },
      model.state);
}

Label majority_combine(std::span<const Label> member_predictions) {
  if (member_predictions.empty()) throw InvalidArgument("majority_combine: no member predictions");
  std::array<std::size_t, kNumLabels> votes{};
  for (Label l : member_predictions) ++votes[index_of(l)];
  // max_element returns the first maximum, i.e. the lowest label index.
  return static_cast<Label>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace vdo::ml
