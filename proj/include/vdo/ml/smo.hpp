#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vdo/error.hpp"
#include "vdo/tfidf.hpp"

namespace vdo::ml {

struct SmoParams {
  double c = 0.5;
  double tolerance = 1e-3;
  double epsilon = 1e-12;
  std::uint64_t seed = 123;
  std::uint64_t max_updates = 1'000'000;
};

struct SmoResult {
  std::vector<double> alphas;
  double bias = 0.0;  // decision f(x) = sum_i alpha_i y_i <x_i, x> + bias
  std::uint64_t updates = 0;
  std::uint64_t passes = 0;
};

class SmoNonConvergence : public Error {
 public:
  SmoNonConvergence(SmoResult best, double violation)
      : Error("SMO did not converge within the update cap (max KKT violation " +
              std::to_string(violation) + ")"),
        best_(std::move(best)),
        violation_(violation) {}
  const SmoResult& best() const noexcept { return best_; }
  double violation() const noexcept { return violation_; }

 private:
  SmoResult best_;
  double violation_;
};

/// Platt's SMO for the linear-kernel soft-margin dual. `y` entries are +1/-1.
/// Working set: first-violator outer loop, second index by max |E1 - E2|,
/// then scans from seeded random offsets.
SmoResult smo_solve(std::span<const SparseVector> x, std::span<const int> y, const SmoParams& params);

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j <x_i, x_j>.
double dual_objective(std::span<const SparseVector> x, std::span<const int> y, std::span<const double> alphas);

/// Largest KKT residual over all samples for the given solution.
double max_kkt_violation(std::span<const SparseVector> x, std::span<const int> y, std::span<const double> alphas,
                         double bias, double c);

/// w = sum_i alpha_i y_i x_i as a sparse vector.
SparseVector primal_weights(std::span<const SparseVector> x, std::span<const int> y, std::span<const double> alphas);

double dot(const SparseVector& a, const SparseVector& b) noexcept;

}  // namespace vdo::ml
