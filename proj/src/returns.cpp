#include "fxtails/returns.hpp"

#include <cmath>

#include "fxtails/errors.hpp"
#include "fxtails/stats.hpp"

namespace fxtails {

ReturnSeries log_returns(std::span<const double> prices, std::size_t horizon) {
    if (horizon < 1) throw ConfigError("log_returns: horizon must be >= 1");
    if (prices.size() < horizon + 1) {
        throw LengthError("log_returns: need at least horizon + 1 prices");
    }
    ReturnSeries out;
    out.horizon = horizon;
    out.values.reserve(prices.size() - horizon);
    for (std::size_t t = 0; t + horizon < prices.size(); ++t) {
        if (!(prices[t] > 0.0) || !(prices[t + horizon] > 0.0)) {
            throw DomainError("log_returns: non-positive price at index " + std::to_string(t));
        }
        out.values.push_back(std::log(prices[t + horizon]) - std::log(prices[t]));
    }
    return out;
}

ReturnSeries segment_log_returns(std::span<const double> row, std::size_t horizon) {
    ReturnSeries out;
    out.horizon = horizon;
    for (const Segment& seg : contiguous_segments(row)) {
        if (seg.length() < horizon + 1) continue;
        const auto part = log_returns(row.subspan(seg.start, seg.length()), horizon);
        out.values.insert(out.values.end(), part.values.begin(), part.values.end());
    }
    if (out.values.empty()) {
        throw LengthError("segment_log_returns: no segment long enough for the horizon");
    }
    return out;
}

NormalizedReturns normalize_returns(const ReturnSeries& returns) {
    const auto& values = returns.values;
    const std::size_t n = values.size();
    if (n < 3) throw LengthError("normalize_returns: need at least 3 returns");
    const double mu = mean(values);
    double total_sq = 0.0;
    for (double v : values) total_sq += (v - mu) * (v - mu);

    NormalizedReturns out;
    out.source_mean = mu;
    out.values.resize(n);
    out.sigma_series.resize(n);
    const double divisor = static_cast<double>(n) - 2.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dev = values[t] - mu;
        const double sq = std::max(total_sq - dev * dev, 0.0);
        const double sigma = std::sqrt(sq / divisor);
        if (!(sigma > 0.0)) {
            throw DegenerateError("normalize_returns: zero leave-one-out variance at index " +
                                  std::to_string(t));
        }
        out.sigma_series[t] = sigma;
        out.values[t] = dev / sigma;
    }
    return out;
}

Moments moments(std::span<const double> sample) {
    if (sample.size() < 4) throw LengthError("moments: need at least 4 observations");
    const double mu = mean(sample);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : sample) {
        const double d = v - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const auto n = static_cast<double>(sample.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw DegenerateError("moments: constant sample");
    Moments out;
    out.mean = mu;
    out.std = std::sqrt(m2);
    out.skewness = m3 / (m2 * out.std);
    out.kurtosis = m4 / (m2 * m2);
    return out;
}

std::map<MarketClass, GroupStat> group_skewness(std::span<const double> skewness,
                                                std::span<const MarketClass> classes) {
    if (skewness.size() != classes.size()) throw LengthError("group_skewness: length mismatch");
    std::map<MarketClass, std::vector<double>> buckets;
    for (std::size_t i = 0; i < skewness.size(); ++i) buckets[classes[i]].push_back(skewness[i]);
    std::map<MarketClass, GroupStat> out;
    for (const auto& [cls, xs] : buckets) {
        GroupStat g;
        g.count = xs.size();
        g.mean = mean(xs);
        g.sd = std::sqrt(variance(xs));
        out[cls] = g;
    }
    return out;
}

}  // namespace fxtails
