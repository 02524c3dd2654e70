#include "vdo/eval/cross_validation.hpp"

#include <exception>

#include "vdo/parallel.hpp"

namespace vdo::eval {
namespace {

template <class T>
std::vector<T> pick(std::span<const T> all, const std::vector<std::size_t>& rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(all[r]);
  return out;
}

}  // namespace

FoldFeatures fold_features(std::span<const TokenList> docs, std::span<const Label> y, const FoldAssignment& folds,
                           std::size_t fold) {
  if (docs.size() != y.size() || folds.fold_of.size() != y.size()) {
    throw InvalidArgument("documents, labels and fold assignment differ in length");
  }
  FoldFeatures f;
  f.fold = fold;
  f.train_rows = folds.train_rows(fold);
  f.test_rows = folds.test_rows(fold);
  const auto train_docs = pick(docs, f.train_rows);
  const auto test_docs = pick(docs, f.test_rows);
  f.vocabulary = build_vocabulary(train_docs);
  f.train = {tfidf_transform(train_docs, f.vocabulary), count_transform(train_docs, f.vocabulary)};
  f.test = {tfidf_transform(test_docs, f.vocabulary), count_transform(test_docs, f.vocabulary)};
  f.train_labels = pick(y, f.train_rows);
  f.test_labels = pick(y, f.test_rows);
  return f;
}

CvResult cross_validate_with(const FoldPredictor& predictor, const Corpus& corpus, std::size_t k, std::uint64_t seed,
                             const Preprocessor& preprocessor) {
  const auto y = corpus.labels();
  if (y.empty()) throw InvalidArgument("cannot cross-validate an empty corpus");

  std::vector<TokenList> docs(corpus.size());
  parallel_for(docs.size(), [&](std::size_t i) { docs[i] = preprocessor(corpus[i].description); });

  CvResult res;
  res.folds = stratified_folds(y, k, seed);
  const auto classes = ml::distinct_classes(y);
  res.per_fold.resize(k);
  parallel_for(k, [&](std::size_t fold) {
    try {
      const auto f = fold_features(docs, y, res.folds, fold);
      auto predicted = predictor(f);
      if (predicted.size() != f.test_rows.size()) throw Error("predictor returned the wrong number of labels");
      auto& out = res.per_fold[fold];
      out.fold = fold;
      out.test_rows = f.test_rows;
      out.confusion = ConfusionMatrix::from_pairs(classes, f.test_labels, predicted);
      out.predicted = std::move(predicted);
      out.vocabulary_size = f.vocabulary.size();
    } catch (const FoldError&) {
      throw;
    } catch (const std::exception& e) {
      throw FoldError(fold, e.what());
    }
  });

  res.pooled = ConfusionMatrix(classes);
  res.predictions.assign(y.size(), y.front());
  for (const auto& f : res.per_fold) {
    res.pooled += f.confusion;
    for (std::size_t i = 0; i < f.test_rows.size(); ++i) res.predictions[f.test_rows[i]] = f.predicted[i];
  }
  return res;
}

CvResult cross_validate(const ml::AlgorithmSpec& spec, const Corpus& corpus, std::size_t k, std::uint64_t seed,
                        const Preprocessor& preprocessor) {
  ml::validate_spec(spec);
  const auto report = validate(corpus, 2);
  if (!report.ok()) throw InvalidArgument("corpus failed validation: " + report.errors.front());
  if (!report.below_minimum.empty()) {
    throw InvalidArgument("class " + std::string(label_id(report.below_minimum.front())) +
                          " has fewer than 2 examples");
  }
  return cross_validate_with(
      [&spec](const FoldFeatures& f) {
        const auto model = ml::train(spec, f.train, f.train_labels);
        std::vector<Label> out;
        out.reserve(f.test_rows.size());
        for (std::size_t i = 0; i < f.test_rows.size(); ++i) out.push_back(ml::predict(model, ml::row(f.test, i)));
        return out;
      },
      corpus, k, seed, preprocessor);
}

}  // namespace vdo::eval
