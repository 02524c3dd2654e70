#include "vdo/eval/folds.hpp"

#include <string>

#include "vdo/error.hpp"
#include "vdo/rng.hpp"

namespace vdo::eval {

std::vector<std::size_t> FoldAssignment::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldAssignment::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) rows.push_back(i);
  }
  return rows;
}

FoldAssignment stratified_folds(std::span<const Label> y, std::size_t k, std::uint64_t seed) {
  if (y.empty()) throw InvalidArgument("cannot fold an empty label vector");
  if (k < 2) throw InvalidArgument("k must be at least 2, got " + std::to_string(k));
  if (k > y.size()) {
    throw InvalidArgument("k = " + std::to_string(k) + " exceeds the number of examples (" + std::to_string(y.size()) +
                          ")");
  }

  std::vector<std::vector<std::size_t>> members(kNumLabels);
  for (std::size_t i = 0; i < y.size(); ++i) members[index_of(y[i])].push_back(i);

  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold_of.assign(y.size(), 0);
  // Each class continues dealing where the previous one stopped, so fold
  // sizes stay balanced overall as well as per class.
  std::size_t next = RngStream(seed, "fold-offset").below(k);
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& rows = members[c];
    if (rows.empty()) continue;
    RngStream(seed, "fold-shuffle", c).shuffle(rows.begin(), rows.end());
    for (std::size_t i : rows) {
      out.fold_of[i] = next;
      next = (next + 1) % k;
    }
  }
  return out;
}

}  // namespace vdo::eval
