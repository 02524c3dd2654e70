#include "vdo/eval/metrics.hpp"

#include <algorithm>
#include <string>

#include "vdo/error.hpp"

namespace vdo::eval {

ConfusionMatrix::ConfusionMatrix(std::vector<Label> classes) : classes_(std::move(classes)) {
  if (!std::is_sorted(classes_.begin(), classes_.end()) ||
      std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end()) {
    throw InvalidArgument("confusion matrix classes must be distinct and in taxonomy order");
  }
  counts_.assign(classes_.size() * classes_.size(), 0);
}

ConfusionMatrix ConfusionMatrix::from_pairs(std::span<const Label> truth, std::span<const Label> predicted) {
  std::vector<Label> classes(truth.begin(), truth.end());
  classes.insert(classes.end(), predicted.begin(), predicted.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return from_pairs(std::move(classes), truth, predicted);
}

ConfusionMatrix ConfusionMatrix::from_pairs(std::vector<Label> classes, std::span<const Label> truth,
                                            std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) throw InvalidArgument("truth and prediction lengths differ");
  ConfusionMatrix m(std::move(classes));
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
  return m;
}

std::size_t ConfusionMatrix::index_of(Label l) const {
  const auto it = std::lower_bound(classes_.begin(), classes_.end(), l);
  if (it == classes_.end() || *it != l) {
    throw InvalidArgument("label " + std::string(label_id(l)) + " is not in the confusion matrix");
  }
  return static_cast<std::size_t>(it - classes_.begin());
}

void ConfusionMatrix::add(Label truth, Label predicted, std::size_t count) {
  counts_[index_of(truth) * n() + index_of(predicted)] += count;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) throw InvalidArgument("cannot add confusion matrices over different classes");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  return *this;
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::size_t ConfusionMatrix::trace() const noexcept {
  std::size_t t = 0;
  for (std::size_t i = 0; i < n(); ++i) t += at(i, i);
  return t;
}

std::size_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::size_t t = 0;
  for (std::size_t j = 0; j < n(); ++j) t += at(truth, j);
  return t;
}

std::size_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::size_t t = 0;
  for (std::size_t i = 0; i < n(); ++i) t += at(i, predicted);
  return t;
}

ClassCounts class_counts(const ConfusionMatrix& m, std::size_t cls) {
  if (cls >= m.num_classes()) throw InvalidArgument("class index out of range");
  ClassCounts c;
  c.tp = m.at(cls, cls);
  c.fn = m.row_sum(cls) - c.tp;
  c.fp = m.col_sum(cls) - c.tp;
  c.tn = m.total() - c.tp - c.fn - c.fp;
  return c;
}

ClassMetrics metrics_from_counts(const ClassCounts& c) {
  ClassMetrics out;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) {
    out.precision = tp / static_cast<double>(c.tp + c.fp);
  } else {
    out.degenerate = true;
  }
  if (c.tp + c.fn > 0) {
    out.recall = tp / static_cast<double>(c.tp + c.fn);
  } else {
    out.degenerate = true;
  }
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& m) {
  std::vector<ClassMetrics> out;
  out.reserve(m.num_classes());
  for (std::size_t c = 0; c < m.num_classes(); ++c) out.push_back(metrics_from_counts(class_counts(m, c)));
  return out;
}

double accuracy(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) throw InvalidArgument("accuracy of an empty confusion matrix");
  return static_cast<double>(m.trace()) / static_cast<double>(total);
}

double kappa(const ConfusionMatrix& m) {
  const double p_o = accuracy(m);
  const auto total = static_cast<double>(m.total());
  double chance = 0.0;
  for (std::size_t c = 0; c < m.num_classes(); ++c) {
    chance += static_cast<double>(m.row_sum(c)) * static_cast<double>(m.col_sum(c));
  }
  const double p_e = chance / (total * total);
  if (p_e >= 1.0) return 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace vdo::eval
