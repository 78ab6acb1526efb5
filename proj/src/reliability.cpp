#include "sgpv/reliability.hpp"

#include <cmath>
#include <ostream>

#include "sgpv/error.hpp"
#include "sgpv/format.hpp"

namespace sgpv {

PriorOdds::PriorOdds(double r) : r_(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw Error(Errc::InvalidConfig, "prior odds r must be positive and finite");
    }
}

double fdr_sgpv(double theta1, const DesignConfig& cfg, PriorOdds odds) {
    const double under_null = prob_alt(cfg.theta0, cfg);
    if (!(under_null > 0.0)) {
        throw Error(Errc::DegenerateDesign, "P(p_delta = 0 | H0) underflows to zero");
    }
    const double under_alt = prob_alt(theta1, cfg);
    return under_null / (under_null + odds.value() * under_alt);
}

std::optional<double> fcr_sgpv(double theta1, const DesignConfig& cfg, PriorOdds odds) {
    const double under_null = prob_null(cfg.theta0, cfg);
    const double under_alt = prob_null(theta1, cfg);
    if (under_null == 0.0 && under_alt == 0.0) return std::nullopt;
    const double weighted = odds.value() * under_alt;
    return weighted / (weighted + under_null);
}

namespace {

void check_rates(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(Errc::InvalidProbability, "alpha must lie in (0, 1)");
    }
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw Error(Errc::InvalidProbability, "beta must lie in [0, 1]");
    }
}

}  // namespace

double fdr_test(PriorOdds odds, double alpha, double beta) {
    check_rates(alpha, beta);
    return alpha / (alpha + odds.value() * (1.0 - beta));
}

double fnr_test(PriorOdds odds, double alpha, double beta) {
    check_rates(alpha, beta);
    const double weighted = beta * odds.value();
    return weighted / (weighted + 1.0 - alpha);
}

std::vector<ReliabilityPoint> emit_reliability_curve(const DesignConfig& cfg, PriorOdds odds,
                                                     std::span<const double> theta1_grid) {
    if (theta1_grid.empty()) throw Error(Errc::InvalidConfig, "theta1 grid is empty");
    cfg.validate();
    std::vector<ReliabilityPoint> rows;
    rows.reserve(theta1_grid.size());
    for (double theta1 : theta1_grid) {
        const double beta = classical_type2(theta1, cfg);
        rows.push_back(ReliabilityPoint{theta1, fdr_sgpv(theta1, cfg, odds), fcr_sgpv(theta1, cfg, odds),
                                        fdr_test(odds, cfg.alpha, beta),
                                        fnr_test(odds, cfg.alpha, beta)});
    }
    return rows;
}

void write_reliability_curve_csv(std::ostream& out, std::span<const ReliabilityPoint> rows, int digits) {
    out << "theta1,fdr_sgpv,fcr_sgpv,fdr_test,fnr_test\n";
    for (const auto& row : rows) {
        out << format_number(row.theta1, digits) << ',' << format_number(row.fdr_sgpv, digits) << ',';
        if (row.fcr_sgpv) out << format_number(*row.fcr_sgpv, digits);
        out << ',' << format_number(row.fdr_test, digits) << ',' << format_number(row.fnr_test, digits)
            << '\n';
    }
}

}  // namespace sgpv
