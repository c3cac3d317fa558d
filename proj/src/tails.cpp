#include "fxtails/tails.hpp"

#include <algorithm>
#include <cmath>

#include "fxtails/errors.hpp"
#include "fxtails/stats.hpp"

namespace fxtails {

std::string to_string(TailSide s) {
    return s == TailSide::positive ? "positive" : "negative";
}

namespace {

std::vector<double> sorted_positive(std::span<const double> samples) {
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (double v : samples) {
        if (!(v > 0.0)) throw DomainError("tail fit: samples must be strictly positive");
        xs.push_back(v);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

// MLE + KS over the sorted tail sample [first, last).
TailFit fit_sorted_tail(const std::vector<double>& sorted, std::size_t first, double x_min,
                        const TailOptions& opts) {
    const std::size_t m = sorted.size() - first;
    if (m < opts.min_tail) {
        throw SparsityError("tail fit: only " + std::to_string(m) + " samples >= cutoff, need " +
                            std::to_string(opts.min_tail));
    }
    double log_sum = 0.0;
    for (std::size_t i = first; i < sorted.size(); ++i) log_sum += std::log(sorted[i] / x_min);
    if (!(log_sum > 0.0)) {
        throw DomainError("tail fit: all tail samples at the cutoff, exponent diverges");
    }
    TailFit fit;
    fit.x_min = x_min;
    fit.n_tail = m;
    fit.gamma = 1.0 + static_cast<double>(m) / log_sum;
    fit.alpha = fit.gamma - 1.0;
    fit.stderr_gamma = fit.alpha / std::sqrt(static_cast<double>(m));

    // Two-sided KS distance between the empirical tail CCDF and the fitted
    // (x/x_min)^-alpha, evaluated on both sides of every step.
    double ks = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = sorted[first + i];
        const double theo = std::pow(x / x_min, -fit.alpha);
        const double emp_at = static_cast<double>(m - i) / static_cast<double>(m);
        const double emp_after = static_cast<double>(m - i - 1) / static_cast<double>(m);
        ks = std::max(ks, std::fabs(emp_at - theo));
        ks = std::max(ks, std::fabs(emp_after - theo));
    }
    fit.ks = ks;
    return fit;
}

}  // namespace

Ccdf empirical_ccdf(std::span<const double> samples) {
    if (samples.empty()) throw LengthError("empirical_ccdf: empty sample");
    const auto xs = sorted_positive(samples);
    const auto n = static_cast<double>(xs.size());
    Ccdf out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0 && xs[i] == xs[i - 1]) continue;
        // #samples >= xs[i] is everything from i to the end.
        out.points.push_back(CcdfPoint{xs[i], static_cast<double>(xs.size() - i) / n});
    }
    return out;
}

TailFit fit_tail_mle(std::span<const double> samples, double x_min, const TailOptions& opts) {
    if (!(x_min > 0.0)) throw DomainError("tail fit: x_min must be > 0");
    const auto sorted = sorted_positive(samples);
    const auto first_it = std::lower_bound(sorted.begin(), sorted.end(), x_min);
    const auto first = static_cast<std::size_t>(first_it - sorted.begin());
    return fit_sorted_tail(sorted, first, x_min, opts);
}

TailFit select_xmin(std::span<const double> samples, const TailOptions& opts) {
    if (samples.size() < 100) {
        throw SparsityError("select_xmin: need at least 100 samples, got " +
                            std::to_string(samples.size()));
    }
    const auto sorted = sorted_positive(samples);

    // Candidate cutoffs: every distinct value, or a quantile-spaced grid when
    // that would exceed the scan cap. Scanned in increasing order so ties on
    // the KS score keep the smallest cutoff.
    std::vector<double> candidates;
    std::vector<double> distinct;
    distinct.reserve(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i == 0 || sorted[i] != sorted[i - 1]) distinct.push_back(sorted[i]);
    }
    if (distinct.size() <= opts.max_candidates) {
        candidates = std::move(distinct);
    } else {
        candidates.reserve(opts.max_candidates);
        for (std::size_t k = 0; k < opts.max_candidates; ++k) {
            const double q = static_cast<double>(k) / static_cast<double>(opts.max_candidates - 1);
            const double c = quantile_sorted(distinct, q);
            if (candidates.empty() || c > candidates.back()) candidates.push_back(c);
        }
    }

    bool found = false;
    TailFit best;
    for (double c : candidates) {
        const auto first_it = std::lower_bound(sorted.begin(), sorted.end(), c);
        const auto first = static_cast<std::size_t>(first_it - sorted.begin());
        if (sorted.size() - first < opts.min_tail) break;  // later candidates only shrink the tail
        TailFit fit;
        try {
            fit = fit_sorted_tail(sorted, first, c, opts);
        } catch (const DomainError&) {
            continue;  // degenerate cutoff (all tail mass at c); keep scanning
        }
        if (!found || fit.ks < best.ks) {
            best = fit;
            found = true;
        }
    }
    if (!found) {
        throw SparsityError("select_xmin: no cutoff leaves >= " + std::to_string(opts.min_tail) +
                            " tail samples");
    }
    return best;
}

TailFit fit_tail_at_quantile(std::span<const double> samples, double quantile,
                             const TailOptions& opts) {
    if (!(quantile >= 0.0 && quantile < 1.0)) {
        throw ConfigError("fit_tail_at_quantile: quantile must be in [0, 1)");
    }
    const auto sorted = sorted_positive(samples);
    if (sorted.empty()) throw LengthError("fit_tail_at_quantile: empty sample");
    const double cutoff = quantile_sorted(sorted, quantile);
    return fit_tail_mle(samples, cutoff, opts);
}

TailSummary tail_exponent_summary(std::span<const TailFit> fits, std::size_t hist_bins) {
    if (fits.empty()) throw LengthError("tail_exponent_summary: no fits");
    if (hist_bins < 1) throw ConfigError("tail_exponent_summary: need >= 1 histogram bin");
    std::vector<double> gammas;
    gammas.reserve(fits.size());
    for (const auto& f : fits) gammas.push_back(f.gamma);
    std::sort(gammas.begin(), gammas.end());

    TailSummary out;
    out.count = gammas.size();
    out.median = median(gammas);
    out.q1 = quantile_sorted(gammas, 0.25);
    out.q3 = quantile_sorted(gammas, 0.75);

    const double lo = gammas.front();
    const double hi = gammas.back();
    const double width = hi > lo ? hi - lo : 1.0;
    out.hist_edges.resize(hist_bins + 1);
    out.hist_counts.assign(hist_bins, 0);
    for (std::size_t b = 0; b <= hist_bins; ++b) {
        out.hist_edges[b] = lo + width * static_cast<double>(b) / static_cast<double>(hist_bins);
    }
    for (double g : gammas) {
        auto b = static_cast<std::size_t>((g - lo) / width * static_cast<double>(hist_bins));
        if (b >= hist_bins) b = hist_bins - 1;
        ++out.hist_counts[b];
    }
    return out;
}

KurtosisExponentFit fit_kurtosis_exponent_relation(std::span<const KurtosisExponentPoint> points) {
    if (points.size() < 3) throw LengthError("kurtosis-exponent fit: need at least 3 pairs");
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& p : points) {
        if (!(p.gamma > 0.0)) {
            throw DomainError("kurtosis-exponent fit: gamma <= 0 for '" + p.code + "'");
        }
        if (!(p.alpha4 > 1.0)) {
            throw DomainError("kurtosis-exponent fit: alpha4 <= 1 for '" + p.code + "'");
        }
        x.push_back(std::log(p.gamma));
        y.push_back(std::log(std::log(p.alpha4)));
    }
    const LineFit line = fit_line(x, y);
    KurtosisExponentFit out;
    out.beta = -line.slope;
    if (out.beta == 0.0) {
        throw DegenerateError("kurtosis-exponent fit: zero slope, scale A undefined");
    }
    out.a = std::exp(line.intercept / out.beta);
    out.rho = pearson(x, y);
    const auto n = static_cast<double>(points.size());
    const double denom = 1.0 - out.rho * out.rho;
    const double t = denom > 0.0 ? out.rho * std::sqrt((n - 2.0) / denom)
                                 : std::numeric_limits<double>::infinity();
    out.p = t_test_p_two_sided(t, n - 2.0);
    return out;
}

}  // namespace fxtails
