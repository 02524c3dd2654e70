#include "vdo/ml/naive_bayes.hpp"

#include <cmath>

#include "vdo/error.hpp"
#include "vdo/ml/dataset.hpp"

namespace vdo::ml {

NaiveBayesModel train_naive_bayes(const FeatureMatrix& counts, std::span<const Label> y) {
  if (counts.rows.size() != y.size()) throw InvalidArgument("naive bayes: row/label count mismatch");
  NaiveBayesModel m;
  m.classes = distinct_classes(y);
  m.num_columns = counts.num_columns;
  const auto k = m.classes.size();
  const auto idx = class_indices(y, m.classes);

  std::vector<double> docs(k, 0.0), totals(k, 0.0);
  std::vector<std::vector<double>> term(k, std::vector<double>(m.num_columns, 0.0));
  for (std::size_t i = 0; i < y.size(); ++i) {
    docs[idx[i]] += 1.0;
    for (const auto& e : counts.rows[i]) {
      term[idx[i]][e.column] += e.value;
      totals[idx[i]] += e.value;
    }
  }

  const double vocab = static_cast<double>(m.num_columns);
  m.log_prior.resize(k);
  m.log_likelihood.assign(k, std::vector<double>(m.num_columns));
  for (std::size_t c = 0; c < k; ++c) {
    m.log_prior[c] = std::log(docs[c] / static_cast<double>(y.size()));
    const double denom = std::log(totals[c] + vocab);
    for (std::size_t t = 0; t < m.num_columns; ++t) m.log_likelihood[c][t] = std::log(term[c][t] + 1.0) - denom;
  }
  return m;
}

std::vector<double> nb_posterior(const NaiveBayesModel& model, const SparseVector& x) {
  std::vector<double> scores = model.log_prior;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    for (const auto& e : x) scores[c] += e.value * model.log_likelihood[c][e.column];
  }
  return scores;
}

Label predict(const NaiveBayesModel& model, const SparseVector& x) {
  const auto scores = nb_posterior(model, x);
  return model.classes[argmax_lowest(scores)];
}

}  // namespace vdo::ml
