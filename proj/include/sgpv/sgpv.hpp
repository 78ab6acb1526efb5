#pragma once

// Second-generation p-values: the fraction of data-supported hypotheses
// (an interval estimate I) that are null hypotheses (an interval null H0),
// with a small-sample correction that caps the value at 1/2 whenever
// |I| > 2|H0|.

#include <optional>
#include <string_view>

#include "sgpv/intervals.hpp"

namespace sgpv {

enum class Classification {
    AlternativeCompatible,  // p_delta == 0
    NullCompatible,         // p_delta == 1
    Inconclusive,           // 0 < p_delta < 1
};

std::string_view to_string(Classification c) noexcept;

// Interval null hypothesis with its half-width delta (the delta-gap unit) and
// centre theta0. Asymmetric nulls store delta = length / 2 and the midpoint.
class NullSpec {
public:
    static NullSpec symmetric(double point_null, double delta);
    static NullSpec from_bounds(double lo, double hi);

    const ExtendedInterval& interval() const noexcept { return interval_; }
    double delta() const noexcept { return delta_; }
    double point_null() const noexcept { return point_null_; }
    double lo() const noexcept { return interval_.lo(); }
    double hi() const noexcept { return interval_.hi(); }

private:
    NullSpec(ExtendedInterval interval, double delta, double point_null)
        : interval_(interval), delta_(delta), point_null_(point_null) {}

    ExtendedInterval interval_;
    double delta_;
    double point_null_;
};

struct SgpvResult {
    double p_delta = 0.0;
    Classification classification = Classification::AlternativeCompatible;
    bool correction_applied = false;
    std::optional<double> delta_gap;  // present exactly when p_delta == 0
};

// p_delta against an arbitrary (possibly unbounded, possibly degenerate) null
// interval. No delta-gap is attached. Throws UnboundedEstimate when I is the
// whole real line and H0 is bounded.
SgpvResult second_gen_p(const ExtendedInterval& estimate, const ExtendedInterval& null_interval);

SgpvResult second_gen_p(const ExtendedInterval& estimate, const NullSpec& h0);

// Signed distance between the intervals in delta units: positive when I lies
// above H0, negative below. Absent whenever the overlap has positive length or
// I sits inside H0; touching endpoints give a gap of 0.
std::optional<double> delta_gap(const ExtendedInterval& estimate, const NullSpec& h0);

// Throws InvalidProportion outside [0, 1].
Classification classify(double p_delta);

// Two-sided z-test p-value against the point null theta0.
double traditional_p(double estimate, double se, double theta0);

// Largest two-sided z-test p-value over all point nulls inside h0.
double max_p_over_null(double estimate, double se, const NullSpec& h0);

// Half-away-from-zero rounding used when printing p-values.
double round_half_away(double value, int decimals = 4);

}  // namespace sgpv
