#include "sgpv/screening.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <boost/math/distributions/students_t.hpp>

#include "sgpv/error.hpp"
#include "sgpv/format.hpp"

namespace sgpv {

std::string_view to_string(TwoSampleMethod m) noexcept {
    return m == TwoSampleMethod::Pooled ? "pooled" : "welch";
}

namespace {

void check_summary(const GroupSummary& g, const char* name) {
    if (g.n < 2) throw Error(Errc::InvalidSummary, std::string(name) + ": need n >= 2");
    if (!(g.sd > 0.0) || !std::isfinite(g.sd)) {
        throw Error(Errc::InvalidSummary, std::string(name) + ": sd must be positive");
    }
    if (!std::isfinite(g.mean)) throw Error(Errc::InvalidSummary, std::string(name) + ": mean not finite");
}

void check_p_values(std::span<const double> p_values) {
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw Error(Errc::InvalidProbability, "p-values must lie in [0, 1]");
        }
    }
}

}  // namespace

TwoSampleResult two_sample_ci(const GroupSummary& a, const GroupSummary& b, double level,
                              TwoSampleMethod method) {
    check_summary(a, "group a");
    check_summary(b, "group b");
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(Errc::InvalidProbability, "confidence level must lie in (0, 1)");
    }
    const double n1 = static_cast<double>(a.n);
    const double n2 = static_cast<double>(b.n);
    const double v1 = a.sd * a.sd / n1;
    const double v2 = b.sd * b.sd / n2;

    double se = 0.0;
    double df = 0.0;
    if (method == TwoSampleMethod::Pooled) {
        df = n1 + n2 - 2.0;
        const double pooled = ((n1 - 1.0) * a.sd * a.sd + (n2 - 1.0) * b.sd * b.sd) / df;
        se = std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
    } else {
        se = std::sqrt(v1 + v2);
        df = (v1 + v2) * (v1 + v2) / (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
    }

    const boost::math::students_t dist(df);
    const double estimate = a.mean - b.mean;
    const double t = estimate / se;
    const double q = boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - level)));
    const double p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
    return TwoSampleResult{estimate, ExtendedInterval(estimate - q * se, estimate + q * se), p, t, df, se};
}

ExtendedInterval log10_transform(const ExtendedInterval& raw) {
    if (raw.lo() < 0.0) {
        throw Error(Errc::InvalidInterval, "log10 scale needs nonnegative bounds, got " + to_string(raw));
    }
    return ExtendedInterval(std::log10(raw.lo()), std::log10(raw.hi()));
}

NullSpec fold_change_null(double fold) {
    if (!(fold > 1.0) || !std::isfinite(fold)) {
        throw Error(Errc::InvalidConfig, "fold-change threshold must exceed 1");
    }
    return NullSpec::symmetric(0.0, std::log10(fold));
}

std::vector<bool> bonferroni_flags(std::span<const double> p_values, double alpha) {
    check_p_values(p_values);
    const double threshold = alpha / static_cast<double>(p_values.size());
    std::vector<bool> flags;
    flags.reserve(p_values.size());
    for (double p : p_values) flags.push_back(p < threshold);
    return flags;
}

std::vector<double> bonferroni_adjust(std::span<const double> p_values) {
    check_p_values(p_values);
    const double m = static_cast<double>(p_values.size());
    std::vector<double> out;
    out.reserve(p_values.size());
    for (double p : p_values) out.push_back(std::min(1.0, m * p));
    return out;
}

std::vector<double> bh_qvalues(std::span<const double> p_values) {
    check_p_values(p_values);
    const std::size_t m = p_values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return p_values[l] < p_values[r]; });

    std::vector<double> q(m);
    double running = 1.0;
    for (std::size_t k = m; k-- > 0;) {
        const double rank = static_cast<double>(k + 1);
        running = std::min(running, p_values[order[k]] * (static_cast<double>(m) / rank));
        q[order[k]] = running;
    }
    return q;
}

ScreenReport batch_sgpv(std::span<const StudyRow> rows, const NullSpec& h0, double alpha) {
    if (rows.empty()) throw Error(Errc::InvalidConfig, "no rows to screen");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidConfig, "alpha must lie in (0, 1)");

    ScreenReport report;
    report.alpha = alpha;
    report.rows.reserve(rows.size());
    ScreenSummary& s = report.summary;
    s.total = rows.size();

    for (const auto& row : rows) {
        ScreenRow out;
        out.id = row.id;
        out.p_raw = row.p_value;
        try {
            out.result = second_gen_p(row.interval, h0);
            switch (out.result->classification) {
                case Classification::AlternativeCompatible: ++s.alternative; break;
                case Classification::NullCompatible: ++s.null; break;
                case Classification::Inconclusive: ++s.inconclusive; break;
            }
        } catch (const Error& e) {
            out.flag = std::string(to_string(e.code()));
            ++s.flagged;
        }
        report.rows.push_back(std::move(out));
    }

    const bool all_p = std::all_of(rows.begin(), rows.end(), [](const StudyRow& r) { return r.p_value.has_value(); });
    if (all_p) {
        std::vector<double> p;
        p.reserve(rows.size());
        for (const auto& r : rows) p.push_back(*r.p_value);
        const auto bonf = bonferroni_adjust(p);
        const auto q = bh_qvalues(p);
        const auto bonf_flags = bonferroni_flags(p, alpha);
        s.raw_significant = 0;
        s.bonferroni_significant = 0;
        s.bh_significant = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            report.rows[i].p_bonferroni = bonf[i];
            report.rows[i].q_bh = q[i];
            if (p[i] < alpha) ++*s.raw_significant;
            if (bonf_flags[i]) ++*s.bonferroni_significant;
            if (q[i] < alpha) ++*s.bh_significant;
        }
    }
    return report;
}

CrossTab cross_tab(const ScreenReport& report, double alpha) {
    std::vector<double> p;
    p.reserve(report.rows.size());
    for (const auto& row : report.rows) {
        if (!row.p_raw) throw Error(Errc::MissingComparator, "row '" + row.id + "' has no p-value");
        p.push_back(*row.p_raw);
    }
    CrossTab tab;
    if (p.empty()) return tab;
    const auto significant = bonferroni_flags(p, alpha);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& result = report.rows[i].result;
        if (!result) {
            ++tab.excluded;
            continue;
        }
        const bool zero = result->p_delta == 0.0;
        if (zero) {
            ++(significant[i] ? tab.zero_significant : tab.zero_not_significant);
        } else {
            ++(significant[i] ? tab.positive_significant : tab.positive_not_significant);
        }
    }
    return tab;
}

std::vector<std::size_t> rank_order(const ScreenReport& report) {
    const auto& rows = report.rows;
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const auto& a = rows[l].result;
        const auto& b = rows[r].result;
        if (!a || !b) return a.has_value() && !b.has_value();
        if (a->p_delta != b->p_delta) return a->p_delta < b->p_delta;
        if (a->p_delta == 0.0) return std::fabs(*a->delta_gap) > std::fabs(*b->delta_gap);
        return false;
    });
    return order;
}

std::vector<std::string> rank_findings(const ScreenReport& report) {
    std::vector<std::string> ids;
    ids.reserve(report.rows.size());
    for (std::size_t i : rank_order(report)) ids.push_back(report.rows[i].id);
    return ids;
}

std::vector<TrackPoint> pointwise_track(std::span<const TrackInput> series, const NullSpec& h0) {
    if (series.empty()) throw Error(Errc::InvalidSeries, "track series is empty");
    std::vector<TrackPoint> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!std::isfinite(series[i].t)) throw Error(Errc::InvalidSeries, "track time is not finite");
        if (i > 0 && !(series[i].t > series[i - 1].t)) {
            throw Error(Errc::InvalidSeries, "track times must be strictly increasing (point " +
                                                 std::to_string(i + 1) + ")");
        }
        const auto r = second_gen_p(series[i].interval, h0);
        TrackPoint point{series[i].t, r.p_delta, r.classification, std::nullopt};
        if (r.classification == Classification::Inconclusive) point.grey_level = r.p_delta;
        out.push_back(point);
    }
    return out;
}

namespace {

void write_optional(std::ostream& out, const std::optional<double>& v, int digits) {
    if (v) out << format_number(*v, digits);
}

}  // namespace

void write_screen_report_csv(std::ostream& out, const ScreenReport& report, int digits) {
    const auto order = rank_order(report);
    std::vector<std::size_t> ranks(report.rows.size(), 0);
    for (std::size_t k = 0; k < order.size(); ++k) ranks[order[k]] = k + 1;

    out << "id,p_delta,classification,delta_gap,p_raw,p_bonferroni,q_bh,rank\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        out << row.id << ',';
        if (row.result) {
            out << format_number(row.result->p_delta, digits) << ',' << to_string(row.result->classification);
        } else {
            out << ',' << row.flag;
        }
        out << ',';
        if (row.result) write_optional(out, row.result->delta_gap, digits);
        out << ',';
        write_optional(out, row.p_raw, digits);
        out << ',';
        write_optional(out, row.p_bonferroni, digits);
        out << ',';
        write_optional(out, row.q_bh, digits);
        out << ',' << ranks[i] << '\n';
    }
}

void write_track_csv(std::ostream& out, std::span<const TrackPoint> points, int digits) {
    out << "t,p_delta,classification,grey_level\n";
    for (const auto& p : points) {
        out << format_number(p.t, digits) << ',' << format_number(p.p_delta, digits) << ','
            << to_string(p.classification) << ',';
        if (p.grey_level) out << format_number(*p.grey_level, digits);
        out << '\n';
    }
}

}  // namespace sgpv
