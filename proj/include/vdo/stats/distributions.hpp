#pragma once

namespace vdo::stats {

/// P(X >= x) for X ~ chi-squared(df). df >= 1.
double chi_squared_upper_tail(double x, double df);

/// P(|T| >= |t|) for T ~ Student t(df). df >= 1.
double student_t_two_sided(double t, double df);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace vdo::stats
