#include "vdo/ml/dataset.hpp"

#include <algorithm>

#include "vdo/error.hpp"
#include "vdo/parallel.hpp"

namespace vdo {
namespace {
std::atomic<unsigned> g_workers{std::max(1u, std::thread::hardware_concurrency())};
}

void set_worker_threads(unsigned n) { g_workers = std::max(1u, n); }
unsigned worker_threads() { return g_workers; }

}  // namespace vdo

namespace vdo::ml {

std::vector<Label> distinct_classes(std::span<const Label> y) {
  std::vector<Label> out(y.begin(), y.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> class_indices(std::span<const Label> y, std::span<const Label> classes) {
  std::vector<std::size_t> out;
  out.reserve(y.size());
  for (Label l : y) {
    auto it = std::lower_bound(classes.begin(), classes.end(), l);
    if (it == classes.end() || *it != l) throw InvalidArgument("label not in class list");
    out.push_back(static_cast<std::size_t>(it - classes.begin()));
  }
  return out;
}

std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace vdo::ml
