#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"
#include "sgpv/error.hpp"
#include "sgpv/screening.hpp"

namespace sgpv {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no sgpv::Error thrown";
    return Errc::InvalidConfig;
}

TEST(TwoSampleCi, IdenticalGroups) {
    const auto r = two_sample_ci({12, 3.0, 1.5}, {12, 3.0, 1.5}, 0.95);
    EXPECT_EQ(r.estimate, 0.0);
    EXPECT_DOUBLE_EQ(r.interval.lo(), -r.interval.hi());
    EXPECT_EQ(r.p_value, 1.0);
}

TEST(TwoSampleCi, PooledMatchesFrozenOracle) {
    // Simpson-rule t oracle with df = 18: two-sided p and the 0.975 quantile.
    const auto r = two_sample_ci({10, 1.0, 1.0}, {10, 0.0, 1.0}, 0.95);
    EXPECT_EQ(r.df, 18.0);
    EXPECT_NEAR(r.se, std::sqrt(0.2), 1e-15);
    EXPECT_NEAR(r.p_value, 0.038249614516114, 1e-12);
    EXPECT_NEAR(r.interval.lo(), 0.060439100518698, 1e-12);
    EXPECT_NEAR(r.interval.hi(), 1.939560899481302, 1e-12);
    EXPECT_NEAR((r.interval.hi() - r.estimate) / r.se, 2.100922040241038, 1e-12);
}

TEST(TwoSampleCi, WelchAgainstLiveOracle) {
    const GroupSummary a{8, 5.2, 2.5}, b{15, 3.1, 0.9};
    const auto r = two_sample_ci(a, b, 0.9, TwoSampleMethod::Welch);
    const long double v1 = 2.5L * 2.5L / 8, v2 = 0.81L / 15;
    const long double df = (v1 + v2) * (v1 + v2) / (v1 * v1 / 7 + v2 * v2 / 14);
    EXPECT_NEAR(r.df, static_cast<double>(df), 1e-12);
    const long double se = std::sqrt(v1 + v2);
    const long double t = 2.1L / se;
    EXPECT_NEAR(r.p_value, static_cast<double>(2 * (1 - oracle::t_cdf(t, df))), 1e-10);
    const long double q = oracle::t_quantile(0.95L, df);
    EXPECT_NEAR(r.interval.hi(), static_cast<double>(2.1L + q * se), 1e-9);
    EXPECT_NEAR(r.interval.lo(), static_cast<double>(2.1L - q * se), 1e-9);
}

TEST(TwoSampleCi, AffineEquivariance) {
    const GroupSummary a{9, 1.3, 0.7}, b{14, 0.4, 1.1};
    for (auto method : {TwoSampleMethod::Pooled, TwoSampleMethod::Welch}) {
        const auto base = two_sample_ci(a, b, 0.95, method);
        const double scale = 3.5, shift = -20.0;
        const auto moved = two_sample_ci({a.n, scale * a.mean + shift, scale * a.sd},
                                         {b.n, scale * b.mean + shift, scale * b.sd}, 0.95, method);
        EXPECT_NEAR(moved.estimate, scale * base.estimate, 1e-12);
        EXPECT_NEAR(moved.interval.lo(), scale * base.interval.lo(), 1e-12);
        EXPECT_NEAR(moved.interval.hi(), scale * base.interval.hi(), 1e-12);
        EXPECT_NEAR(moved.p_value, base.p_value, 1e-13);
    }
}

TEST(TwoSampleCi, RejectsBadSummaries) {
    EXPECT_EQ(code_of([] { two_sample_ci({1, 0, 1}, {5, 0, 1}, 0.95); }), Errc::InvalidSummary);
    EXPECT_EQ(code_of([] { two_sample_ci({5, 0, 0}, {5, 0, 1}, 0.95); }), Errc::InvalidSummary);
    EXPECT_EQ(code_of([] { two_sample_ci({5, 0, 1}, {5, 0, -1}, 0.95); }), Errc::InvalidSummary);
    EXPECT_EQ(code_of([] { two_sample_ci({5, 0, 1}, {5, 0, 1}, 1.0); }), Errc::InvalidProbability);
}

TEST(Log10Transform, Basics) {
    const auto r = log10_transform(ExtendedInterval(1.0, 100.0));
    EXPECT_EQ(r.lo(), 0.0);
    EXPECT_EQ(r.hi(), 2.0);
    EXPECT_EQ(log10_transform(ExtendedInterval(0.0, 10.0)).lo(), -kInf);
    EXPECT_EQ(code_of([] { log10_transform(ExtendedInterval(-1.0, 2.0)); }), Errc::InvalidInterval);
}

TEST(FoldChangeNull, DefaultIsTwoFold) {
    const auto h0 = fold_change_null();
    EXPECT_DOUBLE_EQ(h0.hi(), std::log10(2.0));
    EXPECT_DOUBLE_EQ(h0.lo(), -std::log10(2.0));
    EXPECT_EQ(h0.point_null(), 0.0);
}

StudyRow row(std::string id, double lo, double hi, std::optional<double> p = std::nullopt) {
    return StudyRow{std::move(id), 0.5 * (lo + hi), ExtendedInterval(lo, hi), p};
}

TEST(BatchSgpv, PublishedSingleRows) {
    const std::vector<StudyRow> hazard{row("hr", 1.23, 2.36)};
    const auto hr = batch_sgpv(hazard, NullSpec::from_bounds(0.9, 1.1));
    EXPECT_EQ(hr.rows[0].result->p_delta, 0.0);
    EXPECT_EQ(hr.rows[0].result->classification, Classification::AlternativeCompatible);

    const std::vector<StudyRow> genes{
        {"350", 1.6, log10_transform(ExtendedInterval(1.36, 1.94)), std::nullopt},
        {"6345", 7.7, log10_transform(ExtendedInterval(2.02, 29.74)), std::nullopt},
    };
    const auto g = batch_sgpv(genes, fold_change_null());
    EXPECT_EQ(g.rows[0].result->p_delta, 1.0);
    EXPECT_EQ(g.rows[1].result->p_delta, 0.0);
    EXPECT_EQ(g.summary.null, 1u);
    EXPECT_EQ(g.summary.alternative, 1u);
    EXPECT_FALSE(g.summary.raw_significant);
    EXPECT_FALSE(g.rows[0].q_bh);
}

TEST(BatchSgpv, FlagsUnscorableRowsAndKeepsGoing) {
    const std::vector<StudyRow> rows{row("a", -0.1, 0.1, 0.5), {"b", 0.0, ExtendedInterval(-kInf, kInf), 0.01},
                                     row("c", 1.0, 2.0, 0.001)};
    const auto rep = batch_sgpv(rows, NullSpec::symmetric(0.0, 0.3));
    ASSERT_EQ(rep.rows.size(), 3u);
    EXPECT_FALSE(rep.rows[1].result);
    EXPECT_EQ(rep.rows[1].flag, to_string(Errc::UnboundedEstimate));
    EXPECT_EQ(rep.summary.flagged, 1u);
    EXPECT_EQ(rep.summary.total, 3u);
    EXPECT_EQ(rep.summary.null + rep.summary.alternative + rep.summary.inconclusive, 2u);
    EXPECT_EQ(*rep.summary.raw_significant, 2u);
    EXPECT_EQ(*rep.summary.bonferroni_significant, 2u);
    EXPECT_NEAR(*rep.rows[2].p_bonferroni, 0.003, 1e-15);
    EXPECT_EQ(rank_findings(rep).back(), "b");
}

TEST(BatchSgpv, PermutationEquivariance) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2, 2), w(0.05, 1.5), p(0, 1);
    std::vector<StudyRow> rows;
    for (int i = 0; i < 200; ++i) {
        const double c = u(rng), h = w(rng);
        rows.push_back(row(std::to_string(i), c - h, c + h, p(rng)));
    }
    const auto h0 = NullSpec::symmetric(0.0, 0.3);
    const auto base = batch_sgpv(rows, h0);
    std::vector<std::size_t> perm(rows.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<StudyRow> shuffled;
    for (auto k : perm) shuffled.push_back(rows[k]);
    const auto moved = batch_sgpv(shuffled, h0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        EXPECT_EQ(moved.rows[i].id, base.rows[perm[i]].id);
        EXPECT_EQ(moved.rows[i].result->p_delta, base.rows[perm[i]].result->p_delta);
        EXPECT_EQ(moved.rows[i].q_bh, base.rows[perm[i]].q_bh);
    }
}

TEST(BatchSgpv, DefinitiveOutcomesSurviveLogScale) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> centre(0.2, 6.0), ratio(1.01, 4.0);
    std::vector<StudyRow> raw, logged;
    for (int i = 0; i < 1000; ++i) {
        const double c = centre(rng), k = ratio(rng);
        raw.push_back(row(std::to_string(i), c / k, c * k));
        logged.push_back({raw.back().id, std::log10(c), log10_transform(raw.back().interval), std::nullopt});
    }
    const auto raw_rep = batch_sgpv(raw, NullSpec::from_bounds(0.5, 2.0));
    const auto log_rep = batch_sgpv(logged, fold_change_null());
    int definitive = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto a = raw_rep.rows[i].result->classification;
        const auto b = log_rep.rows[i].result->classification;
        EXPECT_EQ(a == Classification::Inconclusive, b == Classification::Inconclusive);
        if (a != Classification::Inconclusive) {
            EXPECT_EQ(a, b);
            ++definitive;
        }
    }
    EXPECT_GT(definitive, 100);
}

TEST(Bonferroni, Examples) {
    const std::vector<double> one{0.04};
    EXPECT_EQ(bonferroni_flags(one, 0.05), std::vector<bool>{true});
    const std::vector<double> three{0.01, 0.02, 0.5};
    EXPECT_EQ(bonferroni_flags(three, 0.05), (std::vector<bool>{true, false, false}));
    const std::vector<double> ones(5, 1.0);
    EXPECT_EQ(bonferroni_flags(ones, 0.05), std::vector<bool>(5, false));
    EXPECT_EQ(bonferroni_adjust(three), (std::vector<double>{0.03, 0.06, 1.0}));
    const std::vector<double> bad{0.1, 1.2};
    EXPECT_EQ(code_of([&] { bonferroni_flags(bad, 0.05); }), Errc::InvalidProbability);
    EXPECT_EQ(code_of([&] { bonferroni_adjust(bad); }), Errc::InvalidProbability);
}

// q_i = min over p_k >= p_i of m p_k / #{l : p_l <= p_k}, capped at 1.
std::vector<double> brute_force_bh(const std::vector<double>& p) {
    const double m = static_cast<double>(p.size());
    std::vector<double> q(p.size(), 1.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (p[k] < p[i]) continue;
            const auto rank = std::count_if(p.begin(), p.end(), [&](double v) { return v <= p[k]; });
            q[i] = std::min(q[i], p[k] * (m / static_cast<double>(rank)));
        }
    }
    return q;
}

TEST(BhQvalues, Examples) {
    const std::vector<double> single{0.3};
    EXPECT_EQ(bh_qvalues(single), single);
    const std::vector<double> two{0.01, 0.04};
    const auto q = bh_qvalues(two);
    EXPECT_DOUBLE_EQ(q[0], 0.02);
    EXPECT_DOUBLE_EQ(q[1], 0.04);
    const std::vector<double> bad{-0.1};
    EXPECT_EQ(code_of([&] { bh_qvalues(bad); }), Errc::InvalidProbability);
}

TEST(BhQvalues, MatchesBruteForce) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> p(1 + trial % 17);
        for (auto& v : p) v = trial % 3 == 0 ? std::round(u(rng) * 10) / 10 : std::pow(u(rng), 3);
        const auto q = bh_qvalues(p);
        const auto expected = brute_force_bh(p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_NEAR(q[i], expected[i], 1e-15);
            EXPECT_GE(q[i], p[i]);
            EXPECT_LE(q[i], 1.0);
        }
    }
}

TEST(CrossTab, SixRowFixtureByEnumeration) {
    // m = 6, Bonferroni threshold 0.05 / 6.
    const std::vector<StudyRow> rows{
        row("a", 1.0, 2.0, 0.001), row("b", 1.0, 2.0, 0.2),  row("c", -0.1, 0.1, 0.004),
        row("d", -0.5, 0.8, 0.3),  row("e", -3.0, -1.0, 1e-6), {"f", 0.0, ExtendedInterval(-kInf, kInf), 0.001},
    };
    const auto rep = batch_sgpv(rows, NullSpec::symmetric(0.0, 0.3));
    const auto tab = cross_tab(rep, 0.05);

    CrossTab expected;
    for (const auto& r : rep.rows) {
        if (!r.result) {
            ++expected.excluded;
            continue;
        }
        const bool zero = r.result->p_delta == 0.0;
        const bool sig = *r.p_raw < 0.05 / 6.0;
        (zero ? (sig ? expected.zero_significant : expected.zero_not_significant)
              : (sig ? expected.positive_significant : expected.positive_not_significant))++;
    }
    EXPECT_EQ(tab.zero_significant, expected.zero_significant);
    EXPECT_EQ(tab.zero_not_significant, expected.zero_not_significant);
    EXPECT_EQ(tab.positive_significant, expected.positive_significant);
    EXPECT_EQ(tab.positive_not_significant, expected.positive_not_significant);
    EXPECT_EQ(tab.excluded, expected.excluded);
    // Hand count of the same fixture.
    EXPECT_EQ(tab.zero_significant, 2u);
    EXPECT_EQ(tab.zero_not_significant, 1u);
    EXPECT_EQ(tab.positive_significant, 1u);
    EXPECT_EQ(tab.positive_not_significant, 1u);
    EXPECT_EQ(tab.excluded, 1u);
    EXPECT_EQ(tab.total(), 6u);
    EXPECT_EQ(tab.zero_significant + tab.zero_not_significant, rep.summary.alternative);
    EXPECT_EQ(tab.zero_significant + tab.positive_significant + 1, *rep.summary.bonferroni_significant);
}

TEST(CrossTab, EdgeCases) {
    const std::vector<StudyRow> strong{row("a", 1.0, 2.0, 1e-9), row("b", -2.0, -1.0, 1e-8)};
    const auto tab = cross_tab(batch_sgpv(strong, NullSpec::symmetric(0.0, 0.3)), 0.05);
    EXPECT_EQ(tab.zero_significant, 2u);
    EXPECT_EQ(tab.zero_not_significant + tab.positive_significant, 0u);

    EXPECT_EQ(cross_tab(ScreenReport{}, 0.05).total(), 0u);
    const std::vector<StudyRow> none;
    EXPECT_EQ(code_of([&] { batch_sgpv(none, NullSpec::symmetric(0.0, 0.3)); }), Errc::InvalidConfig);

    const std::vector<StudyRow> missing{row("a", 1.0, 2.0, 0.01), row("b", 1.0, 2.0)};
    const auto rep = batch_sgpv(missing, NullSpec::symmetric(0.0, 0.3));
    EXPECT_EQ(code_of([&] { cross_tab(rep, 0.05); }), Errc::MissingComparator);
}

TEST(RankFindings, DeltaGapOrdersTies) {
    const std::vector<StudyRow> rows{row("3252", 1.22, 1.64), row("x", -0.2, 0.5), row("2288", 2.11, 2.87),
                                     row("y", -0.1, 0.1), row("z", -1.0, -0.4)};
    const auto rep = batch_sgpv(rows, NullSpec::symmetric(0.0, 0.3));
    EXPECT_NEAR(*rep.rows[2].result->delta_gap, 6.03, 0.01);
    EXPECT_NEAR(*rep.rows[0].result->delta_gap, 3.07, 0.01);
    EXPECT_EQ(rank_findings(rep), (std::vector<std::string>{"2288", "3252", "z", "x", "y"}));
}

TEST(RankFindings, StableForEqualKeys) {
    const std::vector<StudyRow> rows{row("a", -1, 1), row("b", -1, 1), row("c", -1, 1)};
    const auto rep = batch_sgpv(rows, NullSpec::symmetric(0.0, 0.3));
    EXPECT_EQ(rank_findings(rep), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(PointwiseTrack, Examples) {
    const std::vector<TrackInput> series{{1.0, ExtendedInterval(-0.01, 0.01)},
                                         {2.0, ExtendedInterval(0.02, 0.10)},
                                         {3.0, ExtendedInterval(0.07, 0.20)}};
    const auto h0 = NullSpec::symmetric(0.0, 0.05);
    const auto track = pointwise_track(series, h0);
    ASSERT_EQ(track.size(), 3u);
    EXPECT_EQ(track[0].classification, Classification::NullCompatible);
    EXPECT_FALSE(track[0].grey_level);
    EXPECT_EQ(track[1].classification, Classification::Inconclusive);
    EXPECT_NEAR(track[1].p_delta, 0.375, 1e-12);
    EXPECT_NEAR(*track[1].grey_level, 0.375, 1e-12);
    EXPECT_EQ(track[2].classification, Classification::AlternativeCompatible);

    std::ostringstream out;
    write_track_csv(out, track, 4);
    EXPECT_EQ(out.str(),
              "t,p_delta,classification,grey_level\n"
              "1,1,null_compatible,\n"
              "2,0.375,inconclusive,0.375\n"
              "3,0,alternative_compatible,\n");
}

TEST(PointwiseTrack, RejectsBadSeries) {
    const auto h0 = NullSpec::symmetric(0.0, 0.05);
    const std::vector<TrackInput> empty;
    EXPECT_EQ(code_of([&] { pointwise_track(empty, h0); }), Errc::InvalidSeries);
    const std::vector<TrackInput> repeated{{1.0, ExtendedInterval(0, 1)}, {1.0, ExtendedInterval(0, 1)}};
    EXPECT_EQ(code_of([&] { pointwise_track(repeated, h0); }), Errc::InvalidSeries);
    const std::vector<TrackInput> backwards{{2.0, ExtendedInterval(0, 1)}, {1.0, ExtendedInterval(0, 1)}};
    EXPECT_EQ(code_of([&] { pointwise_track(backwards, h0); }), Errc::InvalidSeries);
}

TEST(ScreenReportCsv, HeaderAndRanks) {
    const std::vector<StudyRow> rows{row("near", -0.1, 0.1, 0.9), row("far", 1.0, 2.0, 0.001)};
    const auto rep = batch_sgpv(rows, NullSpec::symmetric(0.0, 0.3));
    std::ostringstream out;
    write_screen_report_csv(out, rep, 4);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "id,p_delta,classification,delta_gap,p_raw,p_bonferroni,q_bh,rank");
    std::getline(in, line);
    EXPECT_EQ(line, "near,1,null_compatible,,0.9,1,0.9,2");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("far,0,alternative_compatible,2.333", 0), 0u) << line;
    EXPECT_EQ(line.substr(line.size() - 2), ",1");
}

}  // namespace
}  // namespace sgpv
