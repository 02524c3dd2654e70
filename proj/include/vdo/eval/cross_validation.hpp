#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vdo/corpus.hpp"
#include "vdo/error.hpp"
#include "vdo/eval/folds.hpp"
#include "vdo/eval/metrics.hpp"
#include "vdo/ml/dataset.hpp"
#include "vdo/ml/model.hpp"
#include "vdo/textprep.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::eval {

/// Features for one fold. The vocabulary and IDF come from the training rows
/// only; test rows are transformed with it.
struct FoldFeatures {
  std::size_t fold = 0;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  Vocabulary vocabulary;
  ml::FeatureSet train;
  ml::FeatureSet test;
  std::vector<Label> train_labels;
  std::vector<Label> test_labels;
};

FoldFeatures fold_features(std::span<const TokenList> docs, std::span<const Label> y, const FoldAssignment& folds,
                           std::size_t fold);

/// Trains on fold.train and returns one prediction per fold.test row.
using FoldPredictor = std::function<std::vector<Label>(const FoldFeatures& fold)>;

class FoldError : public Error {
 public:
  FoldError(std::size_t fold, const std::string& what)
      : Error("fold " + std::to_string(fold) + ": " + what), fold_(fold) {}
  std::size_t fold() const noexcept { return fold_; }

 private:
  std::size_t fold_;
};

struct FoldResult {
  std::size_t fold = 0;
  std::vector<std::size_t> test_rows;
  std::vector<Label> predicted;
  ConfusionMatrix confusion;
  std::size_t vocabulary_size = 0;
};

struct CvResult {
  FoldAssignment folds;
  std::vector<FoldResult> per_fold;
  ConfusionMatrix pooled;         // over the corpus classes
  std::vector<Label> predictions;  // per example, corpus order
};

/// Preprocesses once, then runs each fold (possibly in parallel) and pools the
/// held-out predictions. Errors are rethrown as FoldError.
CvResult cross_validate_with(const FoldPredictor& predictor, const Corpus& corpus, std::size_t k, std::uint64_t seed,
                             const Preprocessor& preprocessor = Preprocessor());

/// Requires validate(corpus) to report no errors and every class to have at
/// least 2 examples.
CvResult cross_validate(const ml::AlgorithmSpec& spec, const Corpus& corpus, std::size_t k, std::uint64_t seed,
                        const Preprocessor& preprocessor = Preprocessor());

}  // namespace vdo::eval
