#pragma once

// Frequency properties of p_delta under the normal model
//   sqrt(n) * (theta_hat - theta) ~ N(0, V),
// using a 100(1 - alpha)% z-interval as I and [theta0 - delta, theta0 + delta]
// as H0. The standard error of theta_hat is sqrt(V / n); V is the variance of
// the scaled estimator, not of theta_hat itself.

#include <iosfwd>
#include <span>
#include <vector>

namespace sgpv {

struct DesignConfig {
    double theta0 = 0.0;
    double delta = 0.0;     // null half-width; 0 recovers the point-null test
    double n = 1.0;         // sample size
    double variance = 1.0;  // V
    double alpha = 0.05;    // interval estimate miss rate

    double standard_error() const;
    double z_half_alpha() const;  // Phi^{-1}(1 - alpha / 2)

    // Throws InvalidConfig on delta < 0, n <= 0, V <= 0 or alpha outside (0, 1).
    void validate() const;
};

struct OutcomeProbs {
    double p_alt = 0.0;           // P(p_delta = 0)
    double p_null = 0.0;          // P(p_delta = 1)
    double p_inconclusive = 0.0;  // P(0 < p_delta < 1)
};

// P_theta(p_delta = 0), the analogue of power.
double prob_alt(double theta, const DesignConfig& cfg);

// P_theta(p_delta = 1). Exactly 0 unless delta > z * SE strictly.
double prob_null(double theta, const DesignConfig& cfg);

// P_theta(0 < p_delta < 1).
double prob_inconclusive(double theta, const DesignConfig& cfg);

OutcomeProbs outcome_probs(double theta, const DesignConfig& cfg);

// Power of the classical two-sided z-test of theta = theta0 at level alpha.
double classical_power(double theta, const DesignConfig& cfg);
// 1 - classical_power, evaluated without cancellation.
double classical_type2(double theta, const DesignConfig& cfg);

// |I| / |H0| when the design has the given power to detect delta:
// z_{1-alpha/2} / (z_{1-alpha/2} + z_{power}).
double required_interval_ratio(double alpha, double power);

// Power below which |I| > 2|H0| and the small-sample correction kicks in.
double correction_trigger_power(double alpha);

struct PowerCurveRow {
    double theta = 0.0;
    OutcomeProbs probs;
};

std::vector<PowerCurveRow> emit_power_curve(const DesignConfig& cfg, std::span<const double> theta_grid);

// Header `theta,p_alt,p_null,p_inconclusive`, rows in grid order.
void write_power_curve_csv(std::ostream& out, std::span<const PowerCurveRow> rows, int digits = 6);

}  // namespace sgpv
