#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fxtails {

// Discretized probability distribution on a common grid. `edges` has one more
// entry than `mass`; mass sums to 1 for histograms produced here.
struct Histogram {
    std::vector<double> edges;
    std::vector<double> mass;

    std::size_t bins() const { return mass.size(); }
};

// Bins two samples onto shared equal-width edges spanning the pooled range
// [min, max] of both samples. Values equal to the upper edge land in the last
// bin. Throws DegenerateError when the pooled range has zero width.
std::pair<Histogram, Histogram> shared_histograms(std::span<const double> r1,
                                                  std::span<const double> r2,
                                                  std::size_t bins);

// KL(p, q) = sum p_i ln(p_i / q_i) with 0 ln 0 = 0 (natural log). Throws
// DomainError where p has mass and q does not, and ValidationError when the
// histograms do not share edges.
double kl_divergence(const Histogram& p, const Histogram& q);

// JS(p, q) = KL(p, m)/2 + KL(q, m)/2 with m the even mixture. Symmetric,
// finite, and bounded by ln 2.
double js_divergence(const Histogram& p, const Histogram& q);

// D = sqrt(JS) over shared histograms of the two samples; a metric on the
// discretized distributions, bounded by sqrt(ln 2).
double similarity_distance(std::span<const double> r1, std::span<const double> r2,
                           std::size_t bins);

enum class BinningMode { per_pair, global };

struct DistanceMatrix {
    std::vector<std::string> codes;
    std::vector<std::vector<double>> d;
    // Codes dropped because their sample was constant, with a reason each.
    std::vector<std::string> excluded;

    std::size_t size() const { return codes.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i][j]; }
};

inline constexpr std::size_t kDefaultBins = 1000;

// Pairwise similarity distances. Currencies with constant samples are dropped
// (recorded in `excluded`) so every remaining pair has a usable pooled range.
// per_pair mode bins each pair on its own pooled range; global mode bins every
// sample once on the pooled range of all samples.
DistanceMatrix distance_matrix(const std::vector<std::string>& codes,
                               const std::vector<std::vector<double>>& samples,
                               std::size_t bins = kDefaultBins,
                               BinningMode mode = BinningMode::per_pair);

}  // namespace fxtails
