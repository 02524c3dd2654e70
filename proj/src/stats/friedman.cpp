#include "vdo/stats/friedman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vdo/error.hpp"
#include "vdo/stats/distributions.hpp"

namespace vdo::stats {
namespace {

void check_shape(const eval::ScoreMatrix& m) {
  eval::check_scores(m);
  if (m.num_classes() < 2) throw InvalidArgument("need at least 2 classes (blocks) for a rank test");
  if (m.num_classifiers() < 2) throw InvalidArgument("need at least 2 classifiers for a rank test");
}

// Sum over blocks of (t^3 - t) for every group of tied values.
double tie_sum(const std::vector<double>& row) {
  auto sorted = row;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    total += t * t * t - t;
    i = j;
  }
  return total;
}

void holm(std::vector<std::vector<double>>& p) {
  const std::size_t k = p.size();
  struct Entry {
    double p;
    std::size_t i, j;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) entries.push_back({p[i][j], i, j});
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.p < b.p; });
  const double m = static_cast<double>(entries.size());
  double running = 0.0;
  for (std::size_t r = 0; r < entries.size(); ++r) {
    running = std::max(running, std::min(1.0, (m - static_cast<double>(r)) * entries[r].p));
    p[entries[r].i][entries[r].j] = running;
    p[entries[r].j][entries[r].i] = running;
  }
}

}  // namespace

std::vector<std::vector<double>> within_block_ranks(const eval::ScoreMatrix& m) {
  eval::check_scores(m);
  std::vector<std::vector<double>> ranks;
  ranks.reserve(m.num_classes());
  for (const auto& row : m.values) {
    std::vector<std::size_t> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
    std::vector<double> r(row.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j < order.size() && row[order[j]] == row[order[i]]) ++j;
      const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (std::size_t q = i; q < j; ++q) r[order[q]] = avg;
      i = j;
    }
    ranks.push_back(std::move(r));
  }
  return ranks;
}

FriedmanResult friedman(const eval::ScoreMatrix& m) {
  check_shape(m);
  const double n = static_cast<double>(m.num_classes());
  const double k = static_cast<double>(m.num_classifiers());
  const auto ranks = within_block_ranks(m);

  FriedmanResult res;
  res.df = static_cast<int>(m.num_classifiers()) - 1;
  res.rank_sums.assign(m.num_classifiers(), 0.0);
  double ties = 0.0;
  for (std::size_t b = 0; b < ranks.size(); ++b) {
    for (std::size_t j = 0; j < ranks[b].size(); ++j) res.rank_sums[j] += ranks[b][j];
    ties += tie_sum(m.values[b]);
  }
  res.tie_correction = 1.0 - ties / (n * k * (k * k - 1.0));

  double sum_sq = 0.0;
  for (double r : res.rank_sums) sum_sq += r * r;
  const double raw = 12.0 / (n * k * (k + 1.0)) * sum_sq - 3.0 * n * (k + 1.0);
  if (res.tie_correction <= 0.0) {
    res.chi_squared = 0.0;
    res.p_value = 1.0;
    return res;
  }
  res.chi_squared = std::max(0.0, raw / res.tie_correction);
  res.p_value = chi_squared_upper_tail(res.chi_squared, res.df);
  return res;
}

PairwisePValues conover(const eval::ScoreMatrix& m, PAdjust adjust) {
  check_shape(m);
  const std::size_t k = m.num_classifiers();
  const double n = static_cast<double>(m.num_classes());
  const double kd = static_cast<double>(k);
  const auto ranks = within_block_ranks(m);

  std::vector<double> rank_sums(k, 0.0);
  double a = 0.0;
  for (const auto& row : ranks) {
    for (std::size_t j = 0; j < k; ++j) {
      rank_sums[j] += row[j];
      a += row[j] * row[j];
    }
  }
  double sum_sq = 0.0;
  for (double r : rank_sums) sum_sq += r * r;
  const double df = (n - 1.0) * (kd - 1.0);
  const double denom_sq = 2.0 * (n * a - sum_sq) / df;

  PairwisePValues out;
  out.names = m.classifier_names;
  out.method = adjust == PAdjust::Holm ? "conover-holm" : "conover";
  out.p.assign(k, std::vector<double>(k, 1.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double diff = std::abs(rank_sums[i] - rank_sums[j]);
      double p = 1.0;
      if (denom_sq > 0.0 && diff > 0.0) p = std::min(1.0, student_t_two_sided(diff / std::sqrt(denom_sq), df));
      out.p[i][j] = out.p[j][i] = p;
    }
  }
  if (adjust == PAdjust::Holm) holm(out.p);
  return out;
}

}  // namespace vdo::stats
