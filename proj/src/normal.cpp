#include "sgpv/normal.hpp"

#include <cmath>
#include <utility>

#include "sgpv/error.hpp"

namespace sgpv {

namespace {

constexpr double kSqrt32 = 5.656854249492380195206754896838;

// Coefficients from W. J. Cody, "Rational Chebyshev approximations for the
// error function", Math. Comp. 23 (1969), as used in ACM TOMS 715.
constexpr double kA[5] = {2.2352520354606839287, 161.02823106855587881,
                          1067.6894854603709582, 18154.981253343561249,
                          0.065682337918207449113};
constexpr double kB[4] = {47.20258190468824187, 976.09855173777669322,
                          10260.932208618978205, 45507.789335026729956};
constexpr double kC[9] = {0.39894151208813466764, 8.8831497943883759412,
                          93.506656132177855979,  597.27027639480026226,
                          2494.5375852903726711,  6848.1904505362823326,
                          11602.651437647350124,  9842.7148383839780218,
                          1.0765576773720192317e-8};
constexpr double kD[8] = {22.266688044328115691, 235.38790178262499861,
                          1519.377599407554805,  6485.558298266760755,
                          18615.571640885098091, 34900.952721145977266,
                          38912.003286093271411, 19685.429676859990727};
constexpr double kP[6] = {0.21589853405795699,     0.1274011611602473639,
                          0.022235277870649807,    0.001421619193227893466,
                          2.9112874951168792e-5,   0.02307344176494017303};
constexpr double kQ[5] = {1.28426009614491121, 0.468238212480865118,
                          0.0659881378689285515, 0.00378239633202758244,
                          7.29751555083966205e-5};

// exp(-x^2/2) split so that the leading term is computed exactly.
double gauss_factor(double x) {
    const double xsq = std::trunc(x * 16.0) / 16.0;
    const double del = (x - xsq) * (x + xsq);
    return std::exp(-xsq * xsq * 0.5) * std::exp(-del * 0.5);
}

// Returns {P(Z <= x), P(Z > x)}.
std::pair<double, double> normal_tails(double x) {
    if (std::isnan(x)) return {x, x};
    const double y = std::fabs(x);
    double lower = 0.0;
    double upper = 0.0;

    if (y <= 0.67448975) {
        double xnum = 0.0;
        double xden = 0.0;
        if (y > 1e-300) {
            const double xsq = x * x;
            xnum = kA[4] * xsq;
            xden = xsq;
            for (int i = 0; i < 3; ++i) {
                xnum = (xnum + kA[i]) * xsq;
                xden = (xden + kB[i]) * xsq;
            }
        }
        const double temp = x * (xnum + kA[3]) / (xden + kB[3]);
        return {0.5 + temp, 0.5 - temp};
    }

    if (y <= kSqrt32) {
        double xnum = kC[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + kC[i]) * y;
            xden = (xden + kD[i]) * y;
        }
        const double temp = (xnum + kC[7]) / (xden + kD[7]);
        lower = gauss_factor(y) * temp;
        upper = 1.0 - lower;
    } else if (y < 38.5) {
        const double xsq = 1.0 / (x * x);
        double xnum = kP[5] * xsq;
        double xden = xsq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + kP[i]) * xsq;
            xden = (xden + kQ[i]) * xsq;
        }
        double temp = xsq * (xnum + kP[4]) / (xden + kQ[4]);
        temp = (kInvSqrt2Pi - temp) / y;
        lower = gauss_factor(y) * temp;
        upper = 1.0 - lower;
    } else {
        lower = 0.0;
        upper = 1.0;
    }
    // `lower` holds the tail beyond |x|; swap for positive arguments.
    if (x > 0.0) std::swap(lower, upper);
    return {lower, upper};
}

}  // namespace

double std_normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) noexcept { return normal_tails(x).first; }

double std_normal_ccdf(double x) noexcept { return normal_tails(x).second; }

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(Errc::InvalidProbability, "quantile argument must lie in (0, 1)");
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }

    double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
    double val = 0.0;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                    0.24178072517745061177) * r + 1.27045825245236838258) * r +
                  3.64784832476320460504) * r + 5.7694972214606914055) * r +
                4.6303378461565452959) * r + 1.42343711074968357734) /
              (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                    0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                  0.68976733498510000455) * r + 1.6763848301838038494) * r +
                2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                    0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                  0.29656057182850489123) * r + 1.7848265399172913358) * r +
                5.4637849111641143699) * r + 6.6579046435011037772) /
              (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                    1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                  0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -val : val;
}

}  // namespace sgpv
