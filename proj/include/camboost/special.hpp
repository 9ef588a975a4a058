#pragma once

namespace camboost {

// Regularized incomplete beta function I_x(a, b) for a, b > 0, x in [0, 1],
// via the standard continued-fraction expansion.  Absolute accuracy ~1e-12.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of the F distribution with (d1, d2) degrees of freedom (d1, d2 > 0).
double f_distribution_cdf(double f, double d1, double d2);

// Upper tail P(F > f); computed directly from the complementary incomplete
// beta so small p-values keep full relative accuracy.
double f_distribution_sf(double f, double d1, double d2);

}  // namespace camboost
