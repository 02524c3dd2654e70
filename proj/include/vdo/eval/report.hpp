#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vdo/eval/cross_validation.hpp"
#include "vdo/eval/score_matrix.hpp"

namespace vdo::eval {

struct ClassReport {
  Label label;
  std::size_t support = 0;
  ClassCounts counts;
  ClassMetrics metrics;
};

struct EvalReport {
  ml::AlgorithmKind algorithm = ml::AlgorithmKind::Svm;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  ConfusionMatrix pooled;
  std::vector<ClassReport> classes;
  double accuracy = 0.0;
  double kappa = 0.0;
  std::vector<std::size_t> fold_sizes;
  std::vector<double> fold_accuracy;
};

EvalReport make_report(ml::AlgorithmKind algorithm, const CvResult& cv);

nlohmann::json report_to_json(const EvalReport& r);
std::string report_markdown(const EvalReport& r);

/// Per-class F1, one column per report. All reports must share a class list.
ScoreMatrix f1_score_matrix(std::span<const EvalReport> reports);

std::string score_markdown(const ScoreMatrix& m, const RbpResult& r);

}  // namespace vdo::eval
