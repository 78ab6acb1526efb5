#pragma once

// Batch screening of many interval estimates against one interval null, with
// Bonferroni and Benjamini-Hochberg comparators, a p_delta x Bonferroni
// cross-tabulation, delta-gap ranking, and pointwise tracks for curves such as
// survival differences over time.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgpv/intervals.hpp"
#include "sgpv/sgpv.hpp"

namespace sgpv {

struct StudyRow {
    std::string id;
    double estimate = 0.0;
    ExtendedInterval interval{0.0, 0.0};
    std::optional<double> p_value;
};

struct GroupSummary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
};

enum class TwoSampleMethod { Pooled, Welch };

std::string_view to_string(TwoSampleMethod m) noexcept;

struct TwoSampleResult {
    double estimate = 0.0;  // mean(a) - mean(b)
    ExtendedInterval interval{0.0, 0.0};
    double p_value = 1.0;   // two-sided t-test
    double t_statistic = 0.0;
    double df = 0.0;
    double se = 0.0;
};

// Throws InvalidSummary when n < 2 or sd <= 0 in either group.
TwoSampleResult two_sample_ci(const GroupSummary& a, const GroupSummary& b, double level,
                              TwoSampleMethod method = TwoSampleMethod::Pooled);

// Maps a raw-scale (e.g. fold-change) interval to log10. Bounds must be >= 0.
ExtendedInterval log10_transform(const ExtendedInterval& raw);

// [-log10(fold), +log10(fold)]: fold changes between 1/fold and fold.
NullSpec fold_change_null(double fold = 2.0);

struct ScreenRow {
    std::string id;
    std::optional<SgpvResult> result;  // absent when the row is flagged
    std::string flag;                  // empty, or the error code that flagged the row
    std::optional<double> p_raw;
    std::optional<double> p_bonferroni;
    std::optional<double> q_bh;
};

struct ScreenSummary {
    std::size_t total = 0;
    std::size_t alternative = 0;
    std::size_t null = 0;
    std::size_t inconclusive = 0;
    std::size_t flagged = 0;
    // Present only when every row carries a raw p-value.
    std::optional<std::size_t> raw_significant;
    std::optional<std::size_t> bonferroni_significant;
    std::optional<std::size_t> bh_significant;
};

struct ScreenReport {
    std::vector<ScreenRow> rows;
    ScreenSummary summary;
    double alpha = 0.05;
    std::string method;  // how intervals were built, e.g. "pooled", "welch", "supplied"
};

// Per-row p_delta and delta-gap in input order. Rows whose estimate cannot be
// scored (e.g. an unbounded interval) are flagged rather than aborting.
ScreenReport batch_sgpv(std::span<const StudyRow> rows, const NullSpec& h0, double alpha = 0.05);

std::vector<bool> bonferroni_flags(std::span<const double> p_values, double alpha);
std::vector<double> bonferroni_adjust(std::span<const double> p_values);
std::vector<double> bh_qvalues(std::span<const double> p_values);

struct CrossTab {
    std::size_t zero_significant = 0;        // p_delta = 0, Bonferroni p < alpha
    std::size_t zero_not_significant = 0;    // p_delta = 0, Bonferroni p >= alpha
    std::size_t positive_significant = 0;    // p_delta > 0, Bonferroni p < alpha
    std::size_t positive_not_significant = 0;
    std::size_t excluded = 0;                // flagged rows without a p_delta

    std::size_t total() const {
        return zero_significant + zero_not_significant + positive_significant +
               positive_not_significant + excluded;
    }
};

// Throws MissingComparator if any row lacks a raw p-value.
CrossTab cross_tab(const ScreenReport& report, double alpha);

// Ids ordered by p_delta ascending, then |delta_gap| descending among
// p_delta = 0, then input order. Flagged rows go last.
std::vector<std::string> rank_findings(const ScreenReport& report);

// Same ordering as rank_findings, as indices into report.rows.
std::vector<std::size_t> rank_order(const ScreenReport& report);

struct TrackInput {
    double t = 0.0;
    ExtendedInterval interval{0.0, 0.0};
};

struct TrackPoint {
    double t = 0.0;
    double p_delta = 0.0;
    Classification classification = Classification::Inconclusive;
    std::optional<double> grey_level;  // p_delta for inconclusive points, else absent
};

// Throws InvalidSeries on an empty series or non-increasing t.
std::vector<TrackPoint> pointwise_track(std::span<const TrackInput> series, const NullSpec& h0);

// Header `id,p_delta,classification,delta_gap,p_raw,p_bonferroni,q_bh,rank`.
void write_screen_report_csv(std::ostream& out, const ScreenReport& report, int digits = 6);

// Header `t,p_delta,classification,grey_level`.
void write_track_csv(std::ostream& out, std::span<const TrackPoint> points, int digits = 6);

}  // namespace sgpv
