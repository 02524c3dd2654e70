#include "vdo/ml/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vdo/error.hpp"
#include "vdo/ml/dataset.hpp"

namespace vdo::ml {

BoostRound boost_round(std::span<const double> weights, const FeatureMatrix& x, std::span<const Label> y,
                       const BoostParams& params, std::uint64_t member_seed, RngStream& rng) {
  const auto n = y.size();
  if (weights.size() != n || x.rows.size() != n) throw InvalidArgument("boost: size mismatch");
  if (n == 0) throw InvalidArgument("boost: no training rows");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("boost: weights must be finite and non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("boost: weights must sum to 1");

  std::vector<double> cumulative(n);
  std::partial_sum(weights.begin(), weights.end(), cumulative.begin());
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.resample_fraction * n)));
  FeatureMatrix sample;
  sample.num_columns = x.num_columns;
  sample.rows.reserve(m);
  std::vector<Label> sample_y;
  sample_y.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double u = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto row = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(), n - 1));
    sample.rows.push_back(x.rows[row]);
    sample_y.push_back(y[row]);
  }

  BoostRound round;
  round.member.model = train_svm(sample, sample_y, params.base, member_seed);

  std::vector<bool> wrong(n);
  double error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    wrong[i] = predict(round.member.model, x.rows[i]) != y[i];
    if (wrong[i]) error += weights[i];
  }
  round.member.error = error;
  round.next_weights.assign(weights.begin(), weights.end());

  if (error >= 0.5) {
    round.keep = false;
    round.stop = true;
    return round;
  }
  if (error == 0.0) {
    round.member.perfect = true;
    round.stop = true;
    return round;
  }
  const double ratio = (1.0 - error) / error;
  round.member.beta = std::log(ratio);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (wrong[i]) round.next_weights[i] *= ratio;
    sum += round.next_weights[i];
  }
  for (auto& w : round.next_weights) w /= sum;
  return round;
}

BoostModel train_adaboost(const FeatureMatrix& x, std::span<const Label> y, const BoostParams& params,
                          std::uint64_t seed) {
  if (params.iterations < 1) throw InvalidArgument("adaboost: iterations must be >= 1");
  if (!(params.resample_fraction > 0.0 && params.resample_fraction <= 1.0)) {
    throw InvalidArgument("adaboost: resample_fraction must be in (0, 1]");
  }
  BoostModel model;
  model.classes = distinct_classes(y);
  model.num_columns = x.num_columns;
  std::vector<double> weights(y.size(), 1.0 / static_cast<double>(y.size()));
  for (std::size_t t = 0; t < params.iterations; ++t) {
    RngStream rng(seed, "boost-resample", t);
    auto round = boost_round(weights, x, y, params, seed, rng);
    // A first member is kept even when it is too weak, so the ensemble is never empty.
    if (round.keep || model.members.empty()) model.members.push_back(std::move(round.member));
    if (round.stop) break;
    weights = std::move(round.next_weights);
  }
  return model;
}

std::vector<double> boost_scores(const BoostModel& model, const SparseVector& x) {
  std::vector<double> scores(model.classes.size(), 0.0);
  auto slot = [&](Label l) {
    return static_cast<std::size_t>(std::lower_bound(model.classes.begin(), model.classes.end(), l) -
                                    model.classes.begin());
  };
  const BoostMember* decisive = model.members.size() == 1 ? &model.members.front() : nullptr;
  for (const auto& m : model.members) {
    if (m.perfect) decisive = &m;
  }
  if (decisive) {
    scores[slot(predict(decisive->model, x))] = 1.0;
    return scores;
  }
  for (const auto& m : model.members) scores[slot(predict(m.model, x))] += m.beta;
  return scores;
}

Label predict(const BoostModel& model, const SparseVector& x) {
  const auto scores = boost_scores(model, x);
  return model.classes[argmax_lowest(scores)];
}

}  // namespace vdo::ml
