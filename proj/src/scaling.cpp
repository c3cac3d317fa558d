#include "fxtails/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "fxtails/errors.hpp"
#include "fxtails/stats.hpp"

namespace fxtails {

namespace {

// Sum of squared residuals of a least-squares line over window [start, start+s).
double window_residual_sq(std::span<const double> profile, std::size_t start, std::size_t s) {
    // Regress on t = 0..s-1 within the window; closed-form line fit.
    const auto n = static_cast<double>(s);
    const double t_mean = 0.5 * (n - 1.0);
    double y_mean = 0.0;
    for (std::size_t i = 0; i < s; ++i) y_mean += profile[start + i];
    y_mean /= n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        const double dt = static_cast<double>(i) - t_mean;
        stt += dt * dt;
        sty += dt * (profile[start + i] - y_mean);
    }
    const double slope = sty / stt;
    double ss = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        const double fitted = y_mean + slope * (static_cast<double>(i) - t_mean);
        const double r = profile[start + i] - fitted;
        ss += r * r;
    }
    return ss;
}

}  // namespace

DfaResult dfa(std::span<const double> profile, std::span<const std::size_t> window_sizes) {
    if (window_sizes.empty()) throw ConfigError("dfa: no window sizes");
    std::vector<std::size_t> sizes(window_sizes.begin(), window_sizes.end());
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    if (sizes.front() < 4) throw ConfigError("dfa: window sizes must be >= 4");
    const std::size_t n = profile.size();
    if (n < 4 * sizes.back()) {
        throw LengthError("dfa: profile length " + std::to_string(n) +
                          " below 4 * max window size");
    }

    DfaResult out;
    out.window_sizes = sizes;
    out.fluctuation.reserve(sizes.size());
    for (std::size_t s : sizes) {
        const std::size_t windows = n / s;
        double ss = 0.0;
        // Forward partition from the start, backward partition from the end,
        // so remainder samples contribute too.
        for (std::size_t w = 0; w < windows; ++w) {
            ss += window_residual_sq(profile, w * s, s);
            ss += window_residual_sq(profile, n - (w + 1) * s, s);
        }
        const double f = std::sqrt(ss / static_cast<double>(2 * windows * s));
        if (!(f > 0.0)) {
            throw DegenerateError("dfa: zero residual fluctuation at window size " +
                                  std::to_string(s) + " (profile is exactly linear)");
        }
        out.fluctuation.push_back(f);
    }

    std::vector<double> log_s, log_f;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        log_s.push_back(std::log(static_cast<double>(sizes[i])));
        log_f.push_back(std::log(out.fluctuation[i]));
    }
    const LineFit fit = fit_line(log_s, log_f);
    out.exponent = fit.slope;
    out.fit_r2 = fit.r2;
    return out;
}

DfaResult dfa(std::span<const double> profile) {
    const std::size_t n = profile.size();
    if (n < 40) throw LengthError("dfa: profile too short for the default window grid");
    const auto sizes = log_spaced_sizes(10, n / 4, 12);
    return dfa(profile, sizes);
}

VrResult variance_ratio(std::span<const double> returns, std::size_t lag) {
    const std::size_t t_len = returns.size();
    if (lag < 2 || lag > t_len / 2) {
        throw LengthError("variance_ratio: lag " + std::to_string(lag) +
                          " outside [2, T/2] for T = " + std::to_string(t_len));
    }
    const double mu = mean(returns);
    const double var = variance(returns);
    if (!(var > 0.0)) throw DegenerateError("variance_ratio: constant return series");

    const auto t_count = static_cast<double>(t_len);
    const auto l = static_cast<double>(lag);
    double numerator = 0.0;
    // Windows of l returns ending at k-1, for k = lag .. T. Sums are formed
    // directly rather than rolled so no error drifts across windows.
    for (std::size_t k = lag; k <= t_len; ++k) {
        double window_sum = 0.0;
        for (std::size_t t = k - lag; t < k; ++t) window_sum += returns[t];
        const double dev = window_sum - l * mu;
        numerator += dev * dev;
    }
    const double denominator = var * l * (t_count - l + 1.0) * (1.0 - l / t_count);

    VrResult out;
    out.lag = lag;
    out.mean_r = mu;
    out.var_r = var;
    out.vr = numerator / denominator;
    return out;
}

}  // namespace fxtails
