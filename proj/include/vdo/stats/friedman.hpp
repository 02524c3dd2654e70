#pragma once

#include <string>
#include <vector>

#include "vdo/eval/score_matrix.hpp"

namespace vdo::stats {

/// Ranks within each row, 1 = lowest score, ties share the average rank.
std::vector<std::vector<double>> within_block_ranks(const eval::ScoreMatrix& m);

struct FriedmanResult {
  double chi_squared = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::vector<double> rank_sums;
  double tie_correction = 1.0;  // 1 - sum(t^3 - t) / (n k (k^2 - 1))
};

/// Tie-corrected Friedman statistic over classes (blocks) x classifiers.
FriedmanResult friedman(const eval::ScoreMatrix& m);

enum class PAdjust { None, Holm };

struct PairwisePValues {
  std::vector<std::string> names;
  std::vector<std::vector<double>> p;  // symmetric, diagonal 1
  std::string method;
};

/// Conover-Iman pairwise comparison of Friedman rank sums, two-sided t with
/// (n - 1)(k - 1) degrees of freedom.
PairwisePValues conover(const eval::ScoreMatrix& m, PAdjust adjust = PAdjust::None);

}  // namespace vdo::stats
