#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vdo/labels.hpp"

namespace vdo::eval {

struct FoldAssignment {
  std::vector<std::size_t> fold_of;  // per example
  std::size_t k = 0;
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Within each class: seeded shuffle, then round-robin dealing. The first
/// class starts at a seeded fold; each later class starts where the previous
/// one stopped. Requires 2 <= k <= y.size().
FoldAssignment stratified_folds(std::span<const Label> y, std::size_t k, std::uint64_t seed);

}  // namespace vdo::eval
