#pragma once

// Closed intervals over the extended reals. These carry both the interval
// estimate I (a confidence or support interval) and the interval null H0.

#include <compare>
#include <limits>
#include <optional>
#include <string>

#include "sgpv/error.hpp"

namespace sgpv {

// A real number or one of the two infinities. NaN is rejected at construction.
class ExtReal {
public:
    constexpr ExtReal(double v) : v_(v) {  // NOLINT(google-explicit-constructor)
        if (v != v) throw Error(Errc::InvalidInterval, "NaN is not an extended real");
    }

    static constexpr ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static constexpr ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    constexpr double value() const noexcept { return v_; }
    constexpr bool is_finite() const noexcept {
        return v_ != std::numeric_limits<double>::infinity() &&
               v_ != -std::numeric_limits<double>::infinity();
    }

    friend constexpr bool operator==(ExtReal a, ExtReal b) noexcept { return a.v_ == b.v_; }
    friend constexpr std::partial_ordering operator<=>(ExtReal a, ExtReal b) noexcept {
        return a.v_ <=> b.v_;
    }

private:
    double v_;
};

// Nonnegative length on the effect scale; +inf for unbounded intervals.
struct IntervalLength {
    double value = 0.0;

    bool is_finite() const noexcept { return value != std::numeric_limits<double>::infinity(); }
    friend bool operator==(IntervalLength, IntervalLength) = default;
    friend auto operator<=>(IntervalLength, IntervalLength) = default;
};

class ExtendedInterval {
public:
    // Throws InvalidInterval when lo > hi or when both endpoints are the same
    // infinity.
    ExtendedInterval(ExtReal lo, ExtReal hi);

    double lo() const noexcept { return lo_.value(); }
    double hi() const noexcept { return hi_.value(); }

    bool is_bounded() const noexcept { return lo_.is_finite() && hi_.is_finite(); }
    bool contains(double x) const noexcept { return lo() <= x && x <= hi(); }
    bool contains(const ExtendedInterval& other) const noexcept {
        return lo() <= other.lo() && other.hi() <= hi();
    }

    friend bool operator==(const ExtendedInterval&, const ExtendedInterval&) = default;

private:
    ExtReal lo_;
    ExtReal hi_;
};

std::string to_string(const ExtendedInterval& i);

IntervalLength length(const ExtendedInterval& i) noexcept;

// Overlap of two closed intervals. Touching endpoints give a point interval of
// length zero; disjoint intervals give std::nullopt.
std::optional<ExtendedInterval> intersect(const ExtendedInterval& i,
                                          const ExtendedInterval& j) noexcept;

// Restricts `i` to `bounds`, e.g. clipping a one-sided interval at effects
// that cannot occur in practice. Throws TruncationEmpty when disjoint.
ExtendedInterval truncate(const ExtendedInterval& i, const ExtendedInterval& bounds);

// Normal-theory interval estimate +/- q*se with q the (1+level)/2 standard
// normal quantile.
ExtendedInterval z_interval(double estimate, double se, double level);

}  // namespace sgpv
