#include "vdo/ml/svm.hpp"

#include <algorithm>

#include "vdo/error.hpp"
#include "vdo/ml/dataset.hpp"
#include "vdo/rng.hpp"

namespace vdo::ml {

double BinaryMachine::decision(const SparseVector& normalized_x) const noexcept {
  return dot(weights, normalized_x) + bias;
}

SparseVector SvmModel::normalize(const SparseVector& x) const {
  SparseVector out;
  out.reserve(x.size());
  for (const auto& e : x) {
    if (e.column >= num_columns || column_range[e.column] <= 0.0) continue;
    const double v = std::clamp((e.value - column_min[e.column]) / column_range[e.column], 0.0, 1.0);
    if (v != 0.0) out.push_back({e.column, v});
  }
  return out;
}

SvmModel train_svm(const FeatureMatrix& x, std::span<const Label> y, const SvmParams& params, std::uint64_t seed) {
  if (x.rows.size() != y.size()) throw InvalidArgument("svm: row/label count mismatch");
  if (y.empty()) throw InvalidArgument("svm: no training rows");
  if (!(params.c > 0.0)) throw InvalidArgument("svm: C must be positive");
  if (params.exponent != 1.0) throw InvalidArgument("svm: only the linear (degree 1) polynomial kernel is supported");

  SvmModel m;
  m.classes = distinct_classes(y);
  m.num_columns = x.num_columns;

  // Implicit zeros count towards the column minimum.
  std::vector<double> lo(m.num_columns, 0.0), hi(m.num_columns, 0.0);
  std::vector<std::size_t> present(m.num_columns, 0);
  std::vector<double> nz_min(m.num_columns, 0.0);
  for (const auto& row : x.rows) {
    for (const auto& e : row) {
      if (present[e.column]++ == 0) {
        nz_min[e.column] = hi[e.column] = e.value;
      } else {
        nz_min[e.column] = std::min(nz_min[e.column], e.value);
        hi[e.column] = std::max(hi[e.column], e.value);
      }
    }
  }
  m.column_min.resize(m.num_columns);
  m.column_range.resize(m.num_columns);
  for (std::size_t c = 0; c < m.num_columns; ++c) {
    lo[c] = present[c] == x.rows.size() ? nz_min[c] : std::min(0.0, nz_min[c]);
    if (present[c] == 0) hi[c] = 0.0;
    m.column_min[c] = lo[c];
    m.column_range[c] = hi[c] - lo[c];
  }

  std::vector<SparseVector> normalized;
  normalized.reserve(x.rows.size());
  for (const auto& row : x.rows) normalized.push_back(m.normalize(row));

  const auto idx = class_indices(y, m.classes);
  const auto k = m.classes.size();
  std::uint64_t pair = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b, ++pair) {
      std::vector<SparseVector> sub;
      std::vector<int> sign;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] == a || idx[i] == b) {
          sub.push_back(normalized[i]);
          sign.push_back(idx[i] == a ? 1 : -1);
        }
      }
      SmoParams sp{params.c, params.tolerance, params.epsilon, mix64(seed + pair), 1'000'000};
      const auto sol = smo_solve(sub, sign, sp);
      m.machines.push_back({m.classes[a], m.classes[b], primal_weights(sub, sign, sol.alphas), sol.bias});
    }
  }
  return m;
}

std::vector<double> pairwise_votes(std::span<const BinaryMachine> machines, std::span<const Label> classes,
                                   const SparseVector& normalized_x) {
  const auto k = classes.size();
  if (machines.size() != k * (k - 1) / 2) throw InvalidArgument("pairwise: expected k(k-1)/2 machines");
  std::vector<double> votes(k, 0.0);
  std::vector<bool> seen(k * k, false);
  for (const auto& m : machines) {
    const auto pos = std::lower_bound(classes.begin(), classes.end(), m.positive) - classes.begin();
    const auto neg = std::lower_bound(classes.begin(), classes.end(), m.negative) - classes.begin();
    if (static_cast<std::size_t>(pos) >= k || static_cast<std::size_t>(neg) >= k || classes[pos] != m.positive ||
        classes[neg] != m.negative || pos == neg) {
      throw InvalidArgument("pairwise: machine refers to a class outside the class list");
    }
    const auto key = static_cast<std::size_t>(std::min(pos, neg) * static_cast<long>(k) + std::max(pos, neg));
    if (seen[key]) throw InvalidArgument("pairwise: duplicate machine for a class pair");
    seen[key] = true;
    votes[m.decision(normalized_x) >= 0.0 ? pos : neg] += 1.0;
  }
  return votes;
}

Label pairwise_predict(std::span<const BinaryMachine> machines, std::span<const Label> classes,
                       const SparseVector& normalized_x) {
  const auto votes = pairwise_votes(machines, classes, normalized_x);
  return classes[argmax_lowest(votes)];
}

Label predict(const SvmModel& model, const SparseVector& x) {
  return pairwise_predict(model.machines, model.classes, model.normalize(x));
}

}  // namespace vdo::ml
