#pragma once

// Reliability of an observed p_delta via Bayes rule: the false discovery rate
// P(H0 | p_delta = 0) and false confirmation rate P(H1 | p_delta = 1), next to
// the FDR and false non-discovery rate of the classical two-sided test.
//
// H0 is represented by the point null theta0 and H1 by a single alternative
// theta1; curves sweep theta1.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sgpv/design.hpp"

namespace sgpv {

// r = P(H1) / P(H0).
class PriorOdds {
public:
    explicit PriorOdds(double r);
    double value() const noexcept { return r_; }

private:
    double r_;
};

struct ReliabilityPoint {
    double theta1 = 0.0;
    double fdr_sgpv = 0.0;
    std::optional<double> fcr_sgpv;  // absent while p_delta = 1 is impossible
    double fdr_test = 0.0;
    double fnr_test = 0.0;
};

// Throws DegenerateDesign if P_theta0(p_delta = 0) is numerically zero.
double fdr_sgpv(double theta1, const DesignConfig& cfg, PriorOdds odds);

std::optional<double> fcr_sgpv(double theta1, const DesignConfig& cfg, PriorOdds odds);

// [1 + r (1 - beta) / alpha]^-1. beta may sit on the closed limits 0 and 1.
double fdr_test(PriorOdds odds, double alpha, double beta);

// [1 + (1 - alpha) / (beta r)]^-1.
double fnr_test(PriorOdds odds, double alpha, double beta);

// The classical comparator's beta at theta1 is 1 - classical_power(theta1).
std::vector<ReliabilityPoint> emit_reliability_curve(const DesignConfig& cfg, PriorOdds odds,
                                                     std::span<const double> theta1_grid);

// Header `theta1,fdr_sgpv,fcr_sgpv,fdr_test,fnr_test`; absent FCR is an empty field.
void write_reliability_curve_csv(std::ostream& out, std::span<const ReliabilityPoint> rows,
                                 int digits = 6);

}  // namespace sgpv
