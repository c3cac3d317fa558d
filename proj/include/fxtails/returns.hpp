#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fxtails/panel.hpp"

namespace fxtails {

struct ReturnSeries {
    std::vector<double> values;  // log returns
    std::size_t horizon = 1;     // days
};

// Returns centered by the series mean and divided by a per-observation
// volatility that excludes the observation itself:
//
//   sigma(t) = sqrt( (1/(T-2)) * sum_{t' != t} (R(t') - <R>)^2 )
//   r(t)     = (R(t) - <R>) / sigma(t)
struct NormalizedReturns {
    std::vector<double> values;        // r(t)
    double source_mean = 0.0;          // <R>
    std::vector<double> sigma_series;  // sigma(t), all > 0
};

struct Moments {
    double mean = 0.0;
    double std = 0.0;       // population (divisor n)
    double skewness = 0.0;  // m3 / std^3
    double kurtosis = 0.0;  // m4 / std^4, Pearson convention (Gaussian = 3)
};

// out[t] = ln(prices[t + horizon]) - ln(prices[t]); length = n - horizon.
ReturnSeries log_returns(std::span<const double> prices, std::size_t horizon = 1);

// Log returns of every contiguous segment of a gap-ful row, concatenated.
// Returns across gaps are never formed.
ReturnSeries segment_log_returns(std::span<const double> row, std::size_t horizon = 1);

NormalizedReturns normalize_returns(const ReturnSeries& returns);

Moments moments(std::span<const double> sample);

struct GroupStat {
    double mean = 0.0;
    double sd = 0.0;  // population convention
    std::size_t count = 0;
};

// Mean and standard deviation of skewness per market class. Classes with no
// members are absent from the map.
std::map<MarketClass, GroupStat> group_skewness(std::span<const double> skewness,
                                                std::span<const MarketClass> classes);

}  // namespace fxtails
