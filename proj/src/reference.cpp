#include "fxtails/reference.hpp"

#include <cmath>

namespace fxtails {

ReferenceShape reference_shape() { return ReferenceShape{}; }

bool matches_reference_shape(std::size_t currencies, std::size_t days) {
    return currencies >= 60 && days >= 5000;
}

namespace {

void add(std::vector<BenchmarkOutcome>& out, const char* name,
         const std::optional<double>& actual, double expected, double tolerance) {
    if (!actual) return;
    BenchmarkOutcome o;
    o.name = name;
    o.expected = expected;
    o.tolerance = tolerance;
    o.actual = *actual;
    o.within = std::abs(*actual - expected) <= tolerance;
    out.push_back(o);
}

}  // namespace

std::vector<BenchmarkOutcome> evaluate_benchmarks(const ReferenceInputs& in) {
    std::vector<BenchmarkOutcome> out;
    add(out, "median_gamma_pos", in.median_gamma_pos, 3.11, 0.15);
    add(out, "median_gamma_neg", in.median_gamma_neg, 3.28, 0.15);
    add(out, "kurtosis_fit_a_pos", in.kurtosis_fit_a_pos, 5.8, 1.5);
    add(out, "kurtosis_fit_beta_pos", in.kurtosis_fit_beta_pos, 2.4, 0.5);
    add(out, "kurtosis_fit_a_neg", in.kurtosis_fit_a_neg, 5.6, 1.5);
    add(out, "kurtosis_fit_beta_neg", in.kurtosis_fit_beta_neg, 2.8, 0.5);
    add(out, "rho_alpha4_gamma_pos", in.rho_alpha4_gamma_pos, -0.67, 0.10);
    add(out, "rho_alpha4_gamma_neg", in.rho_alpha4_gamma_neg, -0.59, 0.10);
    add(out, "rho_alpha4_g", in.rho_alpha4_g, -0.55, 0.10);
    add(out, "rho_alpha4_theil", in.rho_alpha4_theil, 0.53, 0.10);
    add(out, "exponent_alpha4_g", in.exponent_alpha4_g, -2.2, 0.5);
    add(out, "exponent_alpha4_theil", in.exponent_alpha4_theil, 9.1, 2.0);
    add(out, "regression_b0", in.regression_b0, 6.74, 1.0);
    add(out, "regression_b1", in.regression_b1, -0.48, 0.15);
    add(out, "regression_b2", in.regression_b2, 1.69, 0.5);
    add(out, "regression_r2", in.regression_r2, 0.39, 0.10);
    add(out, "cut_threshold", in.cut_threshold, 0.61, 0.10);
    add(out, "n_nontrivial_clusters", in.n_nontrivial_clusters, 20.0, 5.0);
    return out;
}

const std::vector<double>& reference_period_thresholds() {
    static const std::vector<double> thresholds = {1.1, 0.96, 0.74};
    return thresholds;
}

}  // namespace fxtails
