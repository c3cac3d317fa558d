#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fxtails {

// Benchmark statistics for a full-scale daily panel (75 currencies, 1995-2012,
// ~6000 days). Synthetic desk-scale fixtures are not expected to reproduce
// them, so they run as soft diagnostics: evaluated and reported only when the
// input matches the reference shape, never fatal.
struct ReferenceShape {
    std::size_t currencies = 75;
    std::size_t days = 6035;
    int year_lo = 1995;
    int year_hi = 2012;
};

ReferenceShape reference_shape();

// True when a panel is close enough to the reference shape for the benchmark
// diagnostics to be meaningful.
bool matches_reference_shape(std::size_t currencies, std::size_t days);

// Cross-sectional statistics a run may produce; absent values skip their
// benchmark row.
struct ReferenceInputs {
    std::optional<double> median_gamma_pos;
    std::optional<double> median_gamma_neg;
    std::optional<double> kurtosis_fit_a_pos;
    std::optional<double> kurtosis_fit_beta_pos;
    std::optional<double> kurtosis_fit_a_neg;
    std::optional<double> kurtosis_fit_beta_neg;
    std::optional<double> rho_alpha4_gamma_pos;
    std::optional<double> rho_alpha4_gamma_neg;
    std::optional<double> rho_alpha4_g;
    std::optional<double> rho_alpha4_theil;
    std::optional<double> exponent_alpha4_g;
    std::optional<double> exponent_alpha4_theil;
    std::optional<double> regression_b0;
    std::optional<double> regression_b1;
    std::optional<double> regression_b2;
    std::optional<double> regression_r2;
    std::optional<double> cut_threshold;
    std::optional<double> n_nontrivial_clusters;
};

struct BenchmarkOutcome {
    std::string name;
    double expected = 0.0;
    double tolerance = 0.0;
    double actual = 0.0;
    bool within = false;
};

// One outcome per input value that is present.
std::vector<BenchmarkOutcome> evaluate_benchmarks(const ReferenceInputs& inputs);

// Expected max_cluster_cut thresholds for the three equal sub-periods of the
// reference span.
const std::vector<double>& reference_period_thresholds();

}  // namespace fxtails
