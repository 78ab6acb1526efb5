#pragma once

// Standard normal kernel shared by the interval helpers, the closed-form
// design probabilities and the Monte Carlo sampler.

namespace sgpv {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

double std_normal_pdf(double x) noexcept;

// P(Z <= x). Cody's rational Chebyshev approximation; absolute error below
// 1e-15 and small relative error deep into the lower tail, which matters for
// ratios such as Phi(-6) / Phi(-5).
double std_normal_cdf(double x) noexcept;

// P(Z > x), computed directly rather than as 1 - cdf.
double std_normal_ccdf(double x) noexcept;

// Inverse of std_normal_cdf on (0, 1) (Wichura, AS 241). Throws
// InvalidProbability outside the open unit interval.
double std_normal_quantile(double p);

}  // namespace sgpv
