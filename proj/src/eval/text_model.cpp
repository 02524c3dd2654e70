#include "vdo/pipeline.hpp"

#include "vdo/error.hpp"
#include "vdo/ml/model_io.hpp"
#include "vdo/parallel.hpp"

namespace vdo {

TextModel TextModel::fit(const ml::AlgorithmSpec& spec, const Corpus& corpus, const Preprocessor& preprocessor) {
  std::vector<TokenList> docs(corpus.size());
  parallel_for(docs.size(), [&](std::size_t i) { docs[i] = preprocessor(corpus[i].description); });
  auto vocab = build_vocabulary(docs);
  const ml::FeatureSet x{tfidf_transform(docs, vocab), count_transform(docs, vocab)};
  auto model = ml::train(spec, x, corpus.labels());
  return TextModel(spec, preprocessor, std::move(vocab), std::move(model));
}

TextPrediction TextModel::predict_text(std::string_view text) const {
  TextPrediction p;
  p.tokens = preprocessor_(text);
  const auto weights = tfidf_vector(p.tokens, vocabulary_);
  const auto counts = count_vector(p.tokens, vocabulary_);
  const ml::RowView row{weights, counts};
  p.label = ml::predict(model_, row);
  p.classes = model_.classes;
  p.scores = ml::class_scores(model_, row);
  return p;
}

nlohmann::json TextModel::to_json() const {
  std::vector<std::string> stopwords(preprocessor_.stopwords().begin(), preprocessor_.stopwords().end());
  return {{"format", "vdo-text-model"},
          {"version", ml::kModelFormatVersion},
          {"spec", ml::spec_to_json(spec_)},
          {"stopwords", std::move(stopwords)},
          {"vocabulary",
           {{"terms", vocabulary_.terms()},
            {"doc_frequencies", vocabulary_.doc_frequencies()},
            {"num_documents", vocabulary_.num_documents()}}},
          {"model", ml::model_to_json(model_)}};
}

TextModel TextModel::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || j.value("format", std::string{}) != "vdo-text-model") {
      throw ParseError(0, "not a vdo-text-model document");
    }
    if (j.at("version").get<int>() != ml::kModelFormatVersion) {
      throw ParseError(0, "unsupported model version " + j.at("version").dump());
    }
    auto spec = ml::spec_from_json(j.at("spec"));
    const auto words = j.at("stopwords").get<std::vector<std::string>>();
    Preprocessor pre(std::set<std::string, std::less<>>(words.begin(), words.end()));
    const auto& v = j.at("vocabulary");
    Vocabulary vocab(v.at("terms").get<std::vector<std::string>>(),
                     v.at("doc_frequencies").get<std::vector<std::size_t>>(),
                     v.at("num_documents").get<std::size_t>());
    auto model = ml::model_from_json(j.at("model"));
    if (model.kind != spec.kind) throw ParseError(0, "model kind does not match its spec");
    if (model.num_columns != vocab.size()) throw ParseError(0, "model width does not match the vocabulary");
    return TextModel(std::move(spec), std::move(pre), std::move(vocab), std::move(model));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("invalid model document: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(0, std::string("invalid model document: ") + e.what());
  }
}

}  // namespace vdo
