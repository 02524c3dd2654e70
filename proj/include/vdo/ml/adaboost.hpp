#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vdo/labels.hpp"
#include "vdo/rng.hpp"
#include "vdo/ml/svm.hpp"

namespace vdo::ml {

struct BoostParams {
  std::size_t iterations = 100;
  double resample_fraction = 1.0;
  SvmParams base;
};

struct BoostMember {
  SvmModel model;
  double error = 0.0;
  double beta = 0.0;  // ln((1 - e) / e); unused when perfect
  bool perfect = false;  // e == 0: this member alone decides
};

struct BoostModel {
  std::vector<Label> classes;
  std::size_t num_columns = 0;
  std::vector<BoostMember> members;
};

struct BoostRound {
  BoostMember member;
  std::vector<double> next_weights;
  bool keep = true;  // false when e >= 0.5
  bool stop = false;
};

/// One AdaBoost.M1 round on a weighted resample drawn from `rng`.
BoostRound boost_round(std::span<const double> weights, const FeatureMatrix& x, std::span<const Label> y,
                       const BoostParams& params, std::uint64_t member_seed, RngStream& rng);

BoostModel train_adaboost(const FeatureMatrix& x, std::span<const Label> y, const BoostParams& params,
                          std::uint64_t seed);

/// sum_t beta_t [member_t predicts c], per model class.
std::vector<double> boost_scores(const BoostModel& model, const SparseVector& x);
Label predict(const BoostModel& model, const SparseVector& x);

}  // namespace vdo::ml
