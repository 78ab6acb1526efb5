#pragma once

// Reference computations used only by the tests. None of these share code
// with the library: the normal CDF comes from its power series and the
// Laplace continued fraction in long double, the t CDF from quadrature of
// the density.

#include <cmath>
#include <functional>

namespace sgpv::oracle {

inline long double normal_pdf(long double x) {
    return std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
}

// Upper tail P(Z > x) for x > 0 from the continued fraction
// Q(x) = pdf(x) / (x + 1/(x + 2/(x + 3/(x + ...)))).
inline long double normal_upper_cf(long double x, int terms = 4000) {
    long double tail = x;
    for (int k = terms; k >= 1; --k) tail = x + static_cast<long double>(k) / tail;
    return normal_pdf(x) / tail;
}

// Phi(x) = 1/2 + pdf(x) * sum_k x^(2k+1) / (2k+1)!!, all terms positive for x > 0.
inline long double normal_cdf_series(long double x) {
    long double term = x;
    long double sum = x;
    for (int k = 1; k < 2000; ++k) {
        term *= x * x / static_cast<long double>(2 * k + 1);
        sum += term;
        if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
    }
    return 0.5L + normal_pdf(x) * sum;
}

// Reference Phi: series near the centre, continued fraction in the tails.
inline long double normal_cdf(long double x) {
    if (std::fabs(x) <= 3.0L) return normal_cdf_series(x);
    return x < 0 ? normal_upper_cf(-x) : 1.0L - normal_upper_cf(x);
}

// Bisection on a monotone CDF.
inline long double invert(const std::function<long double(long double)>& cdf, long double p,
                          long double lo = -40.0L, long double hi = 40.0L) {
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5L * (lo + hi);
}

inline long double normal_quantile(long double p) { return invert(normal_cdf, p); }

inline long double t_pdf(long double t, long double df) {
    const long double log_c = std::lgamma(0.5L * (df + 1.0L)) - std::lgamma(0.5L * df) -
                              0.5L * std::log(df * 3.14159265358979323846264338327950288L);
    return std::exp(log_c - 0.5L * (df + 1.0L) * std::log1p(t * t / df));
}

// Composite Simpson on [0, |x|].
inline long double t_cdf(long double x, long double df, int panels = 200000) {
    const long double a = std::fabs(x);
    const long double h = a / panels;
    long double s = t_pdf(0.0L, df) + t_pdf(a, df);
    for (int i = 1; i < panels; ++i) s += t_pdf(i * h, df) * ((i % 2) ? 4.0L : 2.0L);
    const long double half = s * h / 3.0L;
    return x >= 0 ? 0.5L + half : 0.5L - half;
}

inline long double t_quantile(long double p, long double df) {
    return invert([df](long double x) { return t_cdf(x, df, 20000); }, p, -60.0L, 60.0L);
}

}  // namespace sgpv::oracle
