#pragma once

#include <span>
#include <string>
#include <vector>

namespace fxtails {

enum class TailSide { positive, negative };

std::string to_string(TailSide s);

struct CcdfPoint {
    double x = 0.0;
    double pc = 0.0;  // fraction of samples >= x
};

// Complementary cumulative distribution over the distinct sample values.
// pc is non-increasing in x and equals 1 at the smallest value.
struct Ccdf {
    std::vector<CcdfPoint> points;
};

// One-sided power-law fit P(x) ~ x^-gamma for x >= x_min, by continuous
// maximum likelihood. The CCDF exponent is alpha = gamma - 1.
struct TailFit {
    TailSide side = TailSide::positive;
    double x_min = 0.0;
    double gamma = 0.0;
    double alpha = 0.0;     // gamma - 1, kept explicit
    std::size_t n_tail = 0;
    double ks = 0.0;        // sup distance between empirical and fitted tail CCDF
    double stderr_gamma = 0.0;  // (gamma - 1) / sqrt(n_tail)
};

struct TailOptions {
    std::size_t min_tail = 50;      // fewest tail samples accepted by a fit
    std::size_t max_candidates = 500;  // cutoff scan cap; quantile grid beyond
};

enum class XminMode { ks_scan, fixed_quantile };

Ccdf empirical_ccdf(std::span<const double> samples);

// gamma_hat = 1 + n_tail / sum ln(x_i / x_min) over samples >= x_min.
TailFit fit_tail_mle(std::span<const double> samples, double x_min,
                     const TailOptions& opts = {});

// Scans cutoff candidates (distinct values, or a quantile grid when there are
// more than opts.max_candidates) and returns the fit minimizing the KS
// distance, subject to n_tail >= opts.min_tail. Needs >= 100 samples.
TailFit select_xmin(std::span<const double> samples, const TailOptions& opts = {});

// Fixed-quantile alternative: cutoff at the given quantile of the sample.
TailFit fit_tail_at_quantile(std::span<const double> samples, double quantile,
                             const TailOptions& opts = {});

struct TailSummary {
    std::size_t count = 0;
    double median = 0.0;   // midpoint convention for even counts
    double q1 = 0.0;
    double q3 = 0.0;
    std::vector<double> hist_edges;
    std::vector<std::size_t> hist_counts;
};

TailSummary tail_exponent_summary(std::span<const TailFit> fits, std::size_t hist_bins = 12);

// Cross-sectional relation between kurtosis and tail exponent, fit as a line
// in transformed space: log(log alpha4) = -beta * log(gamma) + beta * log(A).
struct KurtosisExponentFit {
    double a = 0.0;     // scale A > 0
    double beta = 0.0;  // shape
    double rho = 0.0;   // Pearson of log(log alpha4) vs log gamma
    double p = 1.0;     // two-sided t-test p-value
};

struct KurtosisExponentPoint {
    std::string code;
    double gamma = 0.0;   // > 0
    double alpha4 = 0.0;  // > 1 so log(log alpha4) is real
};

KurtosisExponentFit fit_kurtosis_exponent_relation(std::span<const KurtosisExponentPoint> points);

}  // namespace fxtails
