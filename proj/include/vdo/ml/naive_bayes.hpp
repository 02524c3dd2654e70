#pragma once

#include <span>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::ml {

/// Multinomial naive Bayes with add-one smoothing, stored in log space.
struct NaiveBayesModel {
  std::vector<Label> classes;
  std::size_t num_columns = 0;
  std::vector<double> log_prior;                    // per class
  std::vector<std::vector<double>> log_likelihood;  // [class][column]
};

/// `counts` holds per-document term counts (or any non-negative weights).
NaiveBayesModel train_naive_bayes(const FeatureMatrix& counts, std::span<const Label> y);

/// log P(c) + sum_t count(t, x) log P(t | c), one score per model class.
std::vector<double> nb_posterior(const NaiveBayesModel& model, const SparseVector& x);

Label predict(const NaiveBayesModel& model, const SparseVector& x);

}  // namespace vdo::ml
