#include "vdo/ml/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vdo/rng.hpp"

namespace vdo::ml {

double dot(const SparseVector& a, const SparseVector& b) noexcept {
  double s = 0.0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->column < j->column) {
      ++i;
    } else if (j->column < i->column) {
      ++j;
    } else {
      s += i->value * j->value;
      ++i;
      ++j;
    }
  }
  return s;
}

namespace {

class Solver {
 public:
  Solver(std::span<const SparseVector> x, std::span<const int> y, const SmoParams& p)
      : n_(x.size()), y_(y), p_(p), rng_(p.seed, "smo"), alpha_(n_, 0.0), error_(n_), kernel_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) kernel_[i * n_ + j] = kernel_[j * n_ + i] = dot(x[i], x[j]);
      error_[i] = -static_cast<double>(y_[i]);  // f = 0 initially
    }
  }

  SmoResult run() {
    sweep();
    // The step-wise bias is only a heuristic once every alpha sits at a bound,
    // so settle it from the final alphas and resume if that exposes violators.
    while (refit_bias() && max_violation() > p_.tolerance) {
      if (sweep() == 0) break;
    }
    return result();
  }

  SmoResult result() const { return {alpha_, bias_, updates_, passes_}; }

  double max_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < n_; ++i) worst = std::max(worst, violation(i));
    return worst;
  }

 private:
  std::size_t sweep() {
    bool examine_all = true;
    std::size_t changed = 0, total = 0;
    while (changed > 0 || examine_all) {
      changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (examine_all || non_bound(i)) changed += examine(i);
      }
      total += changed;
      ++passes_;
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return total;
  }

  // Mean over free alphas, else the midpoint of the interval allowed by the
  // bound ones. Returns whether the bias moved.
  bool refit_bias() {
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double target = y_[i] - (error_[i] + y_[i] - bias_);  // y_i - w.x_i
      if (non_bound(i)) {
        free_sum += target;
        ++free_count;
      } else if ((y_[i] > 0) == at_lower(i)) {
        lo = std::max(lo, target);
      } else {
        hi = std::min(hi, target);
      }
    }
    double b = bias_;
    if (free_count > 0) {
      b = free_sum / static_cast<double>(free_count);
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
      b = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      b = lo;
    } else if (std::isfinite(hi)) {
      b = hi;
    }
    if (b == bias_) return false;
    for (auto& e : error_) e += b - bias_;
    bias_ = b;
    return true;
  }

  double k(std::size_t i, std::size_t j) const { return kernel_[i * n_ + j]; }
  // Alphas within rounding of a bound count as bound.
  bool at_lower(std::size_t i) const { return alpha_[i] <= 1e-12 * p_.c; }
  bool at_upper(std::size_t i) const { return alpha_[i] >= p_.c * (1.0 - 1e-12); }
  bool non_bound(std::size_t i) const { return !at_lower(i) && !at_upper(i); }

  double violation(std::size_t i) const {
    const double r = error_[i] * y_[i];  // y f(x) - 1
    if (alpha_[i] < p_.c && r < 0.0) return -r;
    if (alpha_[i] > 0.0 && r > 0.0) return r;
    return 0.0;
  }

  int examine(std::size_t i2) {
    const double r2 = error_[i2] * y_[i2];
    if (!((r2 < -p_.tolerance && alpha_[i2] < p_.c) || (r2 > p_.tolerance && alpha_[i2] > 0.0))) return 0;

    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!non_bound(i)) continue;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best != n_ && take_step(best, i2)) return 1;

    const std::size_t start1 = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t t = 0; t < n_; ++t) {
      const auto i1 = (start1 + t) % n_;
      if (non_bound(i1) && take_step(i1, i2)) return 1;
    }
    const std::size_t start2 = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t t = 0; t < n_; ++t) {
      const auto i1 = (start2 + t) % n_;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double c = p_.c;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c, c + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - c);
      hi = std::min(c, a1 + a2);
    }
    if (hi - lo <= 0.0) return false;

    const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    double new2;
    if (eta > 0.0) {
      new2 = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective along the constraint line, evaluated at both ends.
      const double f1 = y1 * (e1 - bias_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 - bias_) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo);
      const double h1 = a1 + s * (a2 - hi);
      const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - p_.epsilon) {
        new2 = lo;
      } else if (obj_lo > obj_hi + p_.epsilon) {
        new2 = hi;
      } else {
        new2 = a2;
      }
    }
    if (std::abs(new2 - a2) < p_.epsilon * (new2 + a2 + p_.epsilon)) return false;

    double new1 = a1 + s * (a2 - new2);
    if (new1 < 0.0) {
      new2 += s * new1;
      new1 = 0.0;
    } else if (new1 > c) {
      new2 += s * (new1 - c);
      new1 = c;
    }
    new2 = std::clamp(new2, 0.0, c);
    const auto snap = [c](double a) { return a <= 1e-12 * c ? 0.0 : a >= c * (1.0 - 1e-12) ? c : a; };
    new1 = snap(new1);
    new2 = snap(new2);

    const double d1 = y1 * (new1 - a1), d2 = y2 * (new2 - a2);
    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    double new_bias;
    if (new1 > 0.0 && new1 < c) {
      new_bias = b1;
    } else if (new2 > 0.0 && new2 < c) {
      new_bias = b2;
    } else {
      new_bias = 0.5 * (b1 + b2);
    }
    const double db = new_bias - bias_;
    for (std::size_t i = 0; i < n_; ++i) error_[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;
    alpha_[i1] = new1;
    alpha_[i2] = new2;
    bias_ = new_bias;

    if (++updates_ >= p_.max_updates) throw SmoNonConvergence(result(), max_violation());
    return true;
  }

  std::size_t n_;
  std::span<const int> y_;
  SmoParams p_;
  RngStream rng_;
  std::vector<double> alpha_;
  std::vector<double> error_;  // f(x_i) - y_i
  std::vector<double> kernel_;
  double bias_ = 0.0;
  std::uint64_t updates_ = 0;
  std::uint64_t passes_ = 0;
};

}  // namespace

SmoResult smo_solve(std::span<const SparseVector> x, std::span<const int> y, const SmoParams& params) {
  if (x.size() != y.size()) throw InvalidArgument("smo: row/label count mismatch");
  if (!(params.c > 0.0)) throw InvalidArgument("smo: C must be positive");
  for (int v : y) {
    if (v != 1 && v != -1) throw InvalidArgument("smo: labels must be +1 or -1");
  }
  if (x.empty()) return {};
  Solver solver(x, y, params);
  return solver.run();
}

double dual_objective(std::span<const SparseVector> x, std::span<const int> y, std::span<const double> alphas) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    linear += alphas[i];
    if (alphas[i] == 0.0) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (alphas[j] != 0.0) quad += alphas[i] * alphas[j] * y[i] * y[j] * dot(x[i], x[j]);
    }
  }
  return linear - 0.5 * quad;
}

SparseVector primal_weights(std::span<const SparseVector> x, std::span<const int> y, std::span<const double> alphas) {
  std::vector<std::pair<std::uint32_t, double>> acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (alphas[i] == 0.0) continue;
    for (const auto& e : x[i]) acc.emplace_back(e.column, alphas[i] * y[i] * e.value);
  }
  std::stable_sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector w;
  for (const auto& [col, v] : acc) {
    if (!w.empty() && w.back().column == col) {
      w.back().value += v;
    } else {
      w.push_back({col, v});
    }
  }
  std::erase_if(w, [](const SparseEntry& e) { return e.value == 0.0; });
  return w;
}

double max_kkt_violation(std::span<const SparseVector> x, std::span<const int> y, std::span<const double> alphas,
                         double bias, double c) {
  const auto w = primal_weights(x, y, alphas);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] * (dot(w, x[i]) + bias) - 1.0;
    double v = 0.0;
    if (alphas[i] < c && r < 0.0) v = -r;
    if (alphas[i] > 0.0 && r > 0.0) v = std::max(v, r);
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace vdo::ml
