#include "vdo/stats/distributions.hpp"

#include <cmath>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "vdo/error.hpp"

namespace vdo::stats {
namespace {

void check_df(double df) {
  if (!(df >= 1.0) || !std::isfinite(df)) throw InvalidArgument("degrees of freedom must be >= 1, got " + std::to_string(df));
}

void check_finite(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("statistic must be finite");
}

}  // namespace

double chi_squared_upper_tail(double x, double df) {
  check_df(df);
  check_finite(x);
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double student_t_two_sided(double t, double df) {
  check_df(df);
  check_finite(t);
  if (t == 0.0) return 1.0;
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("normal quantile needs 0 < p < 1");
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace vdo::stats
