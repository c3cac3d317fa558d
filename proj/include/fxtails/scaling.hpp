#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fxtails {

// Detrended fluctuation analysis of a profile. The profile is used as given
// (no cumulative-sum step); callers pass the log-price path.
struct DfaResult {
    std::vector<std::size_t> window_sizes;
    std::vector<double> fluctuation;  // F(s), same length as window_sizes
    double exponent = 0.0;            // slope of ln F(s) vs ln s
    double fit_r2 = 0.0;
};

// For each window size s: floor(N/s) non-overlapping windows from the start
// plus floor(N/s) from the end, a least-squares line subtracted in each, and
// F(s) the root-mean-square of all residuals. Throws DegenerateError when the
// profile is exactly linear (every F(s) would be zero), LengthError when the
// profile is shorter than 4 * max(s).
DfaResult dfa(std::span<const double> profile, std::span<const std::size_t> window_sizes);

// Default grid: 12 log-spaced sizes in [10, N/4].
DfaResult dfa(std::span<const double> profile);

struct VrResult {
    std::size_t lag = 0;
    double vr = 0.0;
    double mean_r = 0.0;
    double var_r = 0.0;  // population variance (divisor T)
};

// Variance ratio over overlapping windows of `lag` returns:
//
//   VR(l) = sum_{k=l}^{T} (sum_{t=k-l}^{k-1} R[t] - l mu)^2
//           / (sigma^2 * l * (T - l + 1) * (1 - l/T))
//
// with R 0-based, mu and sigma^2 the population mean and variance. The
// (T-l+1)(1-l/T) factor keeps the statistic near 1 for an uncorrelated walk.
// Requires 2 <= lag <= T/2 and a non-constant series.
VrResult variance_ratio(std::span<const double> returns, std::size_t lag);

}  // namespace fxtails
