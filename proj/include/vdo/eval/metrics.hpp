#pragma once

#include <span>
#include <vector>

#include "vdo/labels.hpp"

namespace vdo::eval {

/// counts[true][predicted] over a fixed class list.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<Label> classes);

  /// Builds from paired truth/prediction vectors; classes are the union in
  /// taxonomy order unless given.
  static ConfusionMatrix from_pairs(std::span<const Label> truth, std::span<const Label> predicted);
  static ConfusionMatrix from_pairs(std::vector<Label> classes, std::span<const Label> truth,
                                    std::span<const Label> predicted);

  const std::vector<Label>& classes() const noexcept { return classes_; }
  std::size_t num_classes() const noexcept { return classes_.size(); }
  std::size_t index_of(Label l) const;  // throws when absent

  void add(Label truth, Label predicted, std::size_t n = 1);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);  // same class list required

  std::size_t at(std::size_t truth, std::size_t predicted) const { return counts_[truth * n() + predicted]; }
  std::size_t total() const noexcept;
  std::size_t trace() const noexcept;
  std::size_t row_sum(std::size_t truth) const;
  std::size_t col_sum(std::size_t predicted) const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n() const noexcept { return classes_.size(); }
  std::vector<Label> classes_;
  std::vector<std::size_t> counts_;
};

struct ClassCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

/// One-vs-rest binarization of class `cls` (index into the class list).
ClassCounts class_counts(const ConfusionMatrix& m, std::size_t cls);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool degenerate = false;  // a precision or recall denominator was zero
};

/// Zero denominators yield 0 and set `degenerate`.
ClassMetrics metrics_from_counts(const ClassCounts& c);
std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& m);

/// trace / total. Throws InvalidArgument on an empty matrix.
double accuracy(const ConfusionMatrix& m);

/// (p_o - p_e) / (1 - p_e) with marginal chance agreement; 0 when p_e == 1.
double kappa(const ConfusionMatrix& m);

}  // namespace vdo::eval
