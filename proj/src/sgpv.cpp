#include "sgpv/sgpv.hpp"

#include <cmath>
#include <limits>

#include "sgpv/normal.hpp"

namespace sgpv {

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::AlternativeCompatible: return "alternative_compatible";
        case Classification::NullCompatible: return "null_compatible";
        case Classification::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

NullSpec NullSpec::symmetric(double point_null, double delta) {
    if (!std::isfinite(point_null)) {
        throw Error(Errc::InvalidConfig, "point null must be finite");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(Errc::InvalidConfig, "null half-width delta must be positive and finite");
    }
    return NullSpec(ExtendedInterval(point_null - delta, point_null + delta), delta, point_null);
}

NullSpec NullSpec::from_bounds(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(Errc::InvalidConfig, "null interval must have finite bounds");
    }
    if (!(lo < hi)) {
        throw Error(Errc::InvalidConfig, "null interval needs lo < hi");
    }
    return NullSpec(ExtendedInterval(lo, hi), 0.5 * (hi - lo), lo + 0.5 * (hi - lo));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SgpvResult make_result(double p, bool corrected) {
    return SgpvResult{p, classify(p), corrected, std::nullopt};
}

}  // namespace

SgpvResult second_gen_p(const ExtendedInterval& estimate, const ExtendedInterval& null_interval) {
    if (null_interval.contains(estimate)) return make_result(1.0, false);

    const auto overlap = intersect(estimate, null_interval);
    const double len_i = length(estimate).value;
    const double len_h = length(null_interval).value;

    if (len_i == kInf && len_h != kInf && estimate.lo() == -kInf && estimate.hi() == kInf) {
        throw Error(Errc::UnboundedEstimate,
                    "estimate covers the whole real line; truncate it to plausible effects");
    }
    if (!overlap) return make_result(0.0, len_i > 2.0 * len_h);

    const double len_o = length(*overlap).value;
    if (len_h == 0.0 && len_i > 0.0) {
        // Point null inside I: the limit of a symmetric null shrinking onto it,
        // which halves again when the point sits on an endpoint of I.
        const double point = null_interval.lo();
        const bool on_edge = point == estimate.lo() || point == estimate.hi();
        return make_result(on_edge ? 0.25 : 0.5, true);
    }
    if (len_o == 0.0) return make_result(0.0, len_i > 2.0 * len_h);
    if (len_o == kInf) return make_result(1.0, false);

    double p = 0.0;
    bool corrected = false;
    if (len_i == kInf && len_h == kInf) {
        // Finite overlap between two unbounded intervals.
        p = 0.0;
    } else if (len_i > 2.0 * len_h) {
        corrected = true;
        p = 0.5 * len_o / len_h;
    } else {
        p = len_o / len_i;
    }

    // I is not contained in H0 and the overlap has positive length, so the
    // value is strictly inside (0, 1) barring rounding.
    if (p >= 1.0) p = std::nextafter(1.0, 0.0);
    if (p <= 0.0 && len_i != kInf) p = std::numeric_limits<double>::denorm_min();
    return make_result(p, corrected);
}

SgpvResult second_gen_p(const ExtendedInterval& estimate, const NullSpec& h0) {
    SgpvResult result = second_gen_p(estimate, h0.interval());
    if (result.p_delta == 0.0) result.delta_gap = delta_gap(estimate, h0);
    return result;
}

std::optional<double> delta_gap(const ExtendedInterval& estimate, const NullSpec& h0) {
    if (h0.interval().contains(estimate)) return std::nullopt;
    if (estimate.lo() >= h0.hi()) return (estimate.lo() - h0.hi()) / h0.delta();
    if (estimate.hi() <= h0.lo()) return (estimate.hi() - h0.lo()) / h0.delta();
    return std::nullopt;
}

Classification classify(double p_delta) {
    if (!(p_delta >= 0.0 && p_delta <= 1.0)) {
        throw Error(Errc::InvalidProportion, "p_delta must lie in [0, 1]");
    }
    if (p_delta == 0.0) return Classification::AlternativeCompatible;
    if (p_delta == 1.0) return Classification::NullCompatible;
    return Classification::Inconclusive;
}

double traditional_p(double estimate, double se, double theta0) {
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw Error(Errc::InvalidScale, "standard error must be positive and finite");
    }
    return 2.0 * std_normal_cdf(-std::fabs(estimate - theta0) / se);
}

double max_p_over_null(double estimate, double se, const NullSpec& h0) {
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw Error(Errc::InvalidScale, "standard error must be positive and finite");
    }
    if (h0.interval().contains(estimate)) return 1.0;
    const double distance = estimate < h0.lo() ? h0.lo() - estimate : estimate - h0.hi();
    return 2.0 * std_normal_cdf(-distance / se);
}

double round_half_away(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

}  // namespace sgpv
