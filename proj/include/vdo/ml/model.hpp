#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/ml/adaboost.hpp"
#include "vdo/ml/dataset.hpp"
#include "vdo/ml/decision_tree.hpp"
#include "vdo/ml/naive_bayes.hpp"
#include "vdo/ml/random_forest.hpp"
#include "vdo/ml/svm.hpp"

namespace vdo::ml {

enum class AlgorithmKind : std::uint8_t { NaiveBayes, DecisionTree, Svm, RandomForest, AdaBoostSvm, MajorityVote };

inline constexpr std::array<AlgorithmKind, 6> kAllAlgorithms{
    AlgorithmKind::NaiveBayes,   AlgorithmKind::DecisionTree, AlgorithmKind::Svm,
    AlgorithmKind::RandomForest, AlgorithmKind::AdaBoostSvm,  AlgorithmKind::MajorityVote};

std::string_view algorithm_id(AlgorithmKind kind) noexcept;        // "naive_bayes", ...
std::string_view algorithm_display(AlgorithmKind kind) noexcept;   // "Naive Bayes", ...
std::optional<AlgorithmKind> parse_algorithm(std::string_view id) noexcept;

enum class NbInput : std::uint8_t { Counts, Weights };

struct NaiveBayesParams {
  NbInput input = NbInput::Counts;
};

/// Parameters for every kind live side by side; majority vote uses all of
/// them for its members. Defaults reproduce the published configuration.
struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::Svm;
  std::uint64_t seed = 123;
  NaiveBayesParams naive_bayes;
  TreeParams tree;
  SvmParams svm;
  ForestParams forest;
  BoostParams boost;

  static AlgorithmSpec defaults(AlgorithmKind kind) {
    AlgorithmSpec s;
    s.kind = kind;
    return s;
  }
};

/// Throws InvalidArgument describing the first bad parameter.
void validate_spec(const AlgorithmSpec& spec);

struct VoteModel {
  NaiveBayesModel naive_bayes;
  NbInput nb_input = NbInput::Counts;
  SvmModel svm;
  TreeModel tree;
  ForestModel forest;
  BoostModel boost;
};

struct NaiveBayesState {
  NaiveBayesModel model;
  NbInput input = NbInput::Counts;
};

using ModelState = std::variant<NaiveBayesState, TreeModel, SvmModel, ForestModel, BoostModel, VoteModel>;

struct TrainedModel {
  AlgorithmKind kind;
  std::vector<Label> classes;
  std::size_t num_columns = 0;
  ModelState state;
};

/// Requires >= 2 rows, matching label count and >= 2 distinct classes.
/// Deterministic in (spec, data) for any worker-thread count.
TrainedModel train(const AlgorithmSpec& spec, const FeatureSet& x, std::span<const Label> y);

/// Throws InvalidArgument for column ids outside the training width.
Label predict(const TrainedModel& model, const RowView& x);

/// Per-class evidence in model.classes order: NB log posteriors, leaf class
/// weights (tree), pairwise votes (SVM), tree votes (forest), summed betas
/// (boosting) and member votes (majority vote).
std::vector<double> class_scores(const TrainedModel& model, const RowView& x);

/// Plurality; ties go to the lowest label index.
Label majority_combine(std::span<const Label> member_predictions);

}  // namespace vdo::ml
