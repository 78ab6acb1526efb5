#include "sgpv/design.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sgpv/error.hpp"
#include "sgpv/format.hpp"
#include "sgpv/normal.hpp"

namespace sgpv {

double DesignConfig::standard_error() const { return std::sqrt(variance / n); }

double DesignConfig::z_half_alpha() const { return std_normal_quantile(1.0 - 0.5 * alpha); }

void DesignConfig::validate() const {
    if (!std::isfinite(theta0)) throw Error(Errc::InvalidConfig, "theta0 must be finite");
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw Error(Errc::InvalidConfig, "delta must be nonnegative and finite");
    }
    if (!(n > 0.0) || !std::isfinite(n)) throw Error(Errc::InvalidConfig, "n must be positive");
    if (!(variance > 0.0) || !std::isfinite(variance)) {
        throw Error(Errc::InvalidConfig, "V must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidConfig, "alpha must lie in (0, 1)");
}

namespace {

// Standardized distances of theta from the two null edges, in SE units.
struct EdgeScores {
    double lower;  // sqrt(n) (theta0 - delta - theta) / sqrt(V)
    double upper;  // sqrt(n) (theta0 + delta - theta) / sqrt(V)
    double z;
};

EdgeScores edge_scores(double theta, const DesignConfig& cfg) {
    cfg.validate();
    const double se = cfg.standard_error();
    return EdgeScores{(cfg.theta0 - cfg.delta - theta) / se, (cfg.theta0 + cfg.delta - theta) / se,
                      cfg.z_half_alpha()};
}

bool null_gate_open(const DesignConfig& cfg) {
    return cfg.delta > cfg.z_half_alpha() * cfg.standard_error();
}

}  // namespace

double prob_alt(double theta, const DesignConfig& cfg) {
    const auto s = edge_scores(theta, cfg);
    return std_normal_cdf(s.lower - s.z) + std_normal_cdf(-s.upper - s.z);
}

double prob_null(double theta, const DesignConfig& cfg) {
    const auto s = edge_scores(theta, cfg);
    if (!null_gate_open(cfg)) return 0.0;
    return std::max(0.0, std_normal_cdf(s.upper - s.z) - std_normal_cdf(s.lower + s.z));
}

double prob_inconclusive(double theta, const DesignConfig& cfg) {
    const double p = 1.0 - prob_alt(theta, cfg) - prob_null(theta, cfg);
    return std::max(0.0, p);
}

OutcomeProbs outcome_probs(double theta, const DesignConfig& cfg) {
    return OutcomeProbs{prob_alt(theta, cfg), prob_null(theta, cfg), prob_inconclusive(theta, cfg)};
}

double classical_power(double theta, const DesignConfig& cfg) {
    cfg.validate();
    const double shift = (theta - cfg.theta0) / cfg.standard_error();
    const double z = cfg.z_half_alpha();
    return std_normal_cdf(shift - z) + std_normal_cdf(-shift - z);
}

double classical_type2(double theta, const DesignConfig& cfg) {
    cfg.validate();
    const double shift = (theta - cfg.theta0) / cfg.standard_error();
    const double z = cfg.z_half_alpha();
    // Difference of CDFs keeps precision when the power is close to 1.
    const double hi = z - std::abs(shift);
    const double lo = -z - std::abs(shift);
    return std::max(0.0, std_normal_cdf(hi) - std_normal_cdf(lo));
}

double required_interval_ratio(double alpha, double power) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(power > 0.0 && power < 1.0)) {
        throw Error(Errc::InvalidProbability, "alpha and power must lie in (0, 1)");
    }
    const double z = std_normal_quantile(1.0 - 0.5 * alpha);
    return z / (z + std_normal_quantile(power));
}

double correction_trigger_power(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(Errc::InvalidProbability, "alpha must lie in (0, 1)");
    }
    return std_normal_cdf(-0.5 * std_normal_quantile(1.0 - 0.5 * alpha));
}

std::vector<PowerCurveRow> emit_power_curve(const DesignConfig& cfg, std::span<const double> theta_grid) {
    if (theta_grid.empty()) throw Error(Errc::InvalidConfig, "theta grid is empty");
    cfg.validate();
    std::vector<PowerCurveRow> rows;
    rows.reserve(theta_grid.size());
    for (double theta : theta_grid) rows.push_back({theta, outcome_probs(theta, cfg)});
    return rows;
}

void write_power_curve_csv(std::ostream& out, std::span<const PowerCurveRow> rows, int digits) {
    out << "theta,p_alt,p_null,p_inconclusive\n";
    for (const auto& row : rows) {
        out << format_number(row.theta, digits) << ',' << format_number(row.probs.p_alt, digits) << ','
            << format_number(row.probs.p_null, digits) << ','
            << format_number(row.probs.p_inconclusive, digits) << '\n';
    }
}

}  // namespace sgpv
