#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vdo/corpus.hpp"
#include "vdo/ml/model.hpp"
#include "vdo/textprep.hpp"
#include "vdo/tfidf.hpp"

namespace vdo {

struct TextPrediction {
  Label label;
  TokenList tokens;
  std::vector<Label> classes;
  std::vector<double> scores;  // ml::class_scores, in `classes` order
};

/// Preprocessor + vocabulary + classifier fitted on a whole corpus.
class TextModel {
 public:
  static TextModel fit(const ml::AlgorithmSpec& spec, const Corpus& corpus,
                       const Preprocessor& preprocessor = Preprocessor());

  TextPrediction predict_text(std::string_view text) const;

  const ml::AlgorithmSpec& spec() const noexcept { return spec_; }
  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  const ml::TrainedModel& model() const noexcept { return model_; }
  const Preprocessor& preprocessor() const noexcept { return preprocessor_; }

  nlohmann::json to_json() const;
  /// Throws ParseError on malformed or mismatched documents.
  static TextModel from_json(const nlohmann::json& j);

 private:
  TextModel(ml::AlgorithmSpec spec, Preprocessor pre, Vocabulary vocab, ml::TrainedModel model)
      : spec_(std::move(spec)), preprocessor_(std::move(pre)), vocabulary_(std::move(vocab)), model_(std::move(model)) {}

  ml::AlgorithmSpec spec_;
  Preprocessor preprocessor_;
  Vocabulary vocabulary_;
  ml::TrainedModel model_;
};

}  // namespace vdo
