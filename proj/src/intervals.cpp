#include "sgpv/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgpv/normal.hpp"

namespace sgpv {

ExtendedInterval::ExtendedInterval(ExtReal lo, ExtReal hi) : lo_(lo), hi_(hi) {
    if (lo > hi) {
        throw Error(Errc::InvalidInterval,
                    "lower bound exceeds upper bound in " + to_string(*this));
    }
    if (lo == hi && !lo.is_finite()) {
        throw Error(Errc::InvalidInterval, "interval collapses to a point at infinity");
    }
}

std::string to_string(const ExtendedInterval& i) {
    std::ostringstream os;
    os << '[' << i.lo() << ", " << i.hi() << ']';
    return os.str();
}

IntervalLength length(const ExtendedInterval& i) noexcept {
    return IntervalLength{i.hi() - i.lo()};
}

std::optional<ExtendedInterval> intersect(const ExtendedInterval& i,
                                          const ExtendedInterval& j) noexcept {
    const double lo = std::max(i.lo(), j.lo());
    const double hi = std::min(i.hi(), j.hi());
    if (lo > hi) return std::nullopt;
    // lo can never be +inf and hi never -inf here, so this cannot throw.
    return ExtendedInterval(lo, hi);
}

ExtendedInterval truncate(const ExtendedInterval& i, const ExtendedInterval& bounds) {
    auto overlap = intersect(i, bounds);
    if (!overlap) {
        throw Error(Errc::TruncationEmpty,
                    to_string(i) + " does not meet truncation bounds " + to_string(bounds));
    }
    return *overlap;
}

ExtendedInterval z_interval(double estimate, double se, double level) {
    if (!(se > 0.0) || !std::isfinite(se)) {
        throw Error(Errc::InvalidScale, "standard error must be positive and finite");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(Errc::InvalidProbability, "confidence level must lie in (0, 1)");
    }
    if (!std::isfinite(estimate)) {
        throw Error(Errc::InvalidInterval, "estimate must be finite");
    }
    const double half_width = std_normal_quantile(0.5 * (1.0 + level)) * se;
    return ExtendedInterval(estimate - half_width, estimate + half_width);
}

}  // namespace sgpv
