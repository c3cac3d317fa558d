#include "fxtails/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fxtails/errors.hpp"

namespace fxtails {

namespace {

std::pair<double, double> pooled_range(std::span<const double> r1,
                                       std::span<const double> r2) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : r1) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : r2) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

Histogram bin_sample(std::span<const double> sample, double lo, double hi,
                     std::size_t bins) {
    Histogram h;
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b)
        h.edges[b] = lo + width * static_cast<double>(b);
    h.edges.back() = hi;

    std::vector<std::size_t> counts(bins, 0);
    for (double v : sample) {
        auto idx = static_cast<std::size_t>((v - lo) / width);
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
    }
    h.mass.resize(bins);
    const auto n = static_cast<double>(sample.size());
    for (std::size_t b = 0; b < bins; ++b)
        h.mass[b] = static_cast<double>(counts[b]) / n;
    return h;
}

void require_shared_edges(const Histogram& p, const Histogram& q) {
    if (p.edges != q.edges)
        throw ValidationError("histograms do not share bin edges");
}

bool is_constant(std::span<const double> sample) {
    for (double v : sample)
        if (v != sample.front()) return false;
    return true;
}

}  // namespace

std::pair<Histogram, Histogram> shared_histograms(std::span<const double> r1,
                                                  std::span<const double> r2,
                                                  std::size_t bins) {
    if (r1.empty() || r2.empty())
        throw ValidationError("shared_histograms: empty sample");
    if (bins < 2) throw ConfigError("shared_histograms: bins must be >= 2");
    const auto [lo, hi] = pooled_range(r1, r2);
    if (!(hi > lo))
        throw DegenerateError("shared_histograms: pooled range has zero width");
    return {bin_sample(r1, lo, hi, bins), bin_sample(r2, lo, hi, bins)};
}

double kl_divergence(const Histogram& p, const Histogram& q) {
    require_shared_edges(p, q);
    double sum = 0.0;
    for (std::size_t b = 0; b < p.mass.size(); ++b) {
        const double pb = p.mass[b];
        if (pb == 0.0) continue;
        const double qb = q.mass[b];
        if (qb == 0.0)
            throw DomainError("kl_divergence undefined: p > 0 where q = 0");
        sum += pb * std::log(pb / qb);
    }
    return sum;
}

double js_divergence(const Histogram& p, const Histogram& q) {
    require_shared_edges(p, q);
    Histogram m;
    m.edges = p.edges;
    m.mass.resize(p.mass.size());
    for (std::size_t b = 0; b < p.mass.size(); ++b)
        m.mass[b] = 0.5 * (p.mass[b] + q.mass[b]);
    const double js = 0.5 * kl_divergence(p, m) + 0.5 * kl_divergence(q, m);
    // Cancellation can leave a tiny negative where p == q.
    return std::max(js, 0.0);
}

double similarity_distance(std::span<const double> r1, std::span<const double> r2,
                           std::size_t bins) {
    const auto [hp, hq] = shared_histograms(r1, r2, bins);
    return std::sqrt(js_divergence(hp, hq));
}

DistanceMatrix distance_matrix(const std::vector<std::string>& codes,
                               const std::vector<std::vector<double>>& samples,
                               std::size_t bins, BinningMode mode) {
    if (codes.size() != samples.size())
        throw ValidationError("distance_matrix: codes and samples differ in length");
    if (bins < 2) throw ConfigError("distance_matrix: bins must be >= 2");

    DistanceMatrix out;
    std::vector<std::span<const double>> kept;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (samples[i].empty() || is_constant(samples[i])) {
            out.excluded.push_back(codes[i] + ": constant sample, no distribution to compare");
            continue;
        }
        out.codes.push_back(codes[i]);
        kept.emplace_back(samples[i]);
    }
    const std::size_t n = kept.size();
    if (n < 2)
        throw ValidationError("distance_matrix: fewer than 2 usable currencies");

    out.d.assign(n, std::vector<double>(n, 0.0));

    if (mode == BinningMode::global) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& s : kept) {
            for (double v : s) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        if (!(hi > lo))
            throw DegenerateError("distance_matrix: global range has zero width");
        std::vector<Histogram> hs;
        hs.reserve(n);
        for (const auto& s : kept) hs.push_back(bin_sample(s, lo, hi, bins));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dij = std::sqrt(js_divergence(hs[i], hs[j]));
                out.d[i][j] = dij;
                out.d[j][i] = dij;
            }
        return out;
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = similarity_distance(kept[i], kept[j], bins);
            out.d[i][j] = dij;
            out.d[j][i] = dij;
        }
    return out;
}

}  // namespace fxtails
