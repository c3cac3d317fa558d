#include "fxtails/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fxtails/csv.hpp"
#include "fxtails/errors.hpp"
#include "fxtails/stats.hpp"

namespace fxtails {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON mapping
// ---------------------------------------------------------------------------

NLOHMANN_JSON_SERIALIZE_ENUM(Linkage, {
    {Linkage::complete, "complete"},
    {Linkage::single, "single"},
    {Linkage::average, "average"},
})
NLOHMANN_JSON_SERIALIZE_ENUM(TailSide, {
    {TailSide::positive, "positive"},
    {TailSide::negative, "negative"},
})
NLOHMANN_JSON_SERIALIZE_ENUM(Regime, {
    {Regime::floating, "floating"},
    {Regime::fixed_peg, "fixed_peg"},
    {Regime::crawling_peg, "crawling_peg"},
    {Regime::horizontal_band, "horizontal_band"},
})
NLOHMANN_JSON_SERIALIZE_ENUM(MarketClass, {
    {MarketClass::developed, "developed"},
    {MarketClass::emerging, "emerging"},
    {MarketClass::frontier, "frontier"},
})
NLOHMANN_JSON_SERIALIZE_ENUM(TheilMode, {
    {TheilMode::fixed_slots, "fixed_slots"},
    {TheilMode::nonzero_products, "nonzero_products"},
})
NLOHMANN_JSON_SERIALIZE_ENUM(BinningMode, {
    {BinningMode::per_pair, "per_pair"},
    {BinningMode::global, "global"},
})

inline void to_json(json& j, const Date& d) { j = d.to_string(); }
inline void from_json(const json& j, Date& d) { d = Date::parse(j.get<std::string>()); }

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AnalysisConfig, panel_path, metadata_path,
                                   gdp_path, exports_path, theil_path, outdir,
                                   period_count, bins, vr_lag, dfa_window_count,
                                   linkage, min_tail, year_lo, year_hi, seed,
                                   min_coverage, theil_slots, theil_mode, binning)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TailFit, side, x_min, gamma, alpha, n_tail,
                                   ks, stderr_gamma)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TailRecord, ok, error, fit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Moments, mean, std, skewness, kurtosis)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CcdfPoint, x, pc)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CurrencyResult, code, market_class, regime,
                                   region, n_returns, has_moments, moments,
                                   tail_pos, tail_neg, has_dfa, dfa_exponent,
                                   dfa_r2, dfa_sizes, dfa_f, has_vr, vr, has_g,
                                   g_mean, has_theil, theil_mean, ccdf_pos,
                                   ccdf_neg, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(TailSummary, count, median, q1, q3,
                                   hist_edges, hist_counts)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(KurtosisExponentFit, a, beta, rho, p)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(GroupSkewRow, market_class, mean, sd, count)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CrossSection, has_gamma_pos, gamma_pos,
                                   has_gamma_neg, gamma_neg, has_kurt_fit_pos,
                                   kurt_fit_pos, has_kurt_fit_neg, kurt_fit_neg,
                                   skewness_by_class, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CorrelationResult, rho, p, n)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PowerFit, exponent, prefactor, r2)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RegressionFit, b0, b1, b2, r2, p, n)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MacroSection, n_matched, has_g_corr, g_corr,
                                   g_fit, has_theil_corr, theil_corr, theil_fit,
                                   has_regression, regression, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Merge, a, b, height)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Dendrogram, leaves, merges)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterCut, threshold, clusters, labels,
                                   n_nontrivial)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DistanceMatrix, codes, d, excluded)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClusterSection, has, linkage, distance,
                                   dendrogram, cut, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BenchmarkOutcome, name, expected, tolerance,
                                   actual, within)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SpanReport, name, start, end, day_count,
                                   currencies, cross, macro, clusters,
                                   benchmarks, warnings)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Report, version, generated_at, config,
                                   panel_exclusions, warnings, full, periods)

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

namespace {

void validate_config(const AnalysisConfig& cfg) {
    if (cfg.panel_path.empty()) throw ConfigError("config: 'panel' is required");
    if (cfg.period_count < 1) throw ConfigError("config: period_count must be >= 1");
    if (cfg.bins < 2) throw ConfigError("config: bins must be >= 2");
    if (cfg.vr_lag < 2) throw ConfigError("config: vr_lag must be >= 2");
    if (cfg.dfa_window_count < 4)
        throw ConfigError("config: dfa_windows must be >= 4");
    if (cfg.min_tail < 2) throw ConfigError("config: min_tail must be >= 2");
    if (cfg.year_lo > cfg.year_hi)
        throw ConfigError("config: year_lo must not exceed year_hi");
    if (!(cfg.min_coverage >= 0.0 && cfg.min_coverage <= 1.0))
        throw ConfigError("config: min_coverage must be in [0, 1]");
    if (cfg.theil_slots < 1) throw ConfigError("config: theil_slots must be >= 1");
}

}  // namespace

AnalysisConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config " + path + ": not a JSON object");

    AnalysisConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "panel") cfg.panel_path = value.get<std::string>();
            else if (key == "metadata") cfg.metadata_path = value.get<std::string>();
            else if (key == "gdp") cfg.gdp_path = value.get<std::string>();
            else if (key == "exports") cfg.exports_path = value.get<std::string>();
            else if (key == "theil") cfg.theil_path = value.get<std::string>();
            else if (key == "outdir") cfg.outdir = value.get<std::string>();
            else if (key == "period_count") cfg.period_count = value.get<std::size_t>();
            else if (key == "bins") cfg.bins = value.get<std::size_t>();
            else if (key == "vr_lag") cfg.vr_lag = value.get<std::size_t>();
            else if (key == "dfa_windows") cfg.dfa_window_count = value.get<std::size_t>();
            else if (key == "linkage") cfg.linkage = parse_linkage(value.get<std::string>());
            else if (key == "min_tail") cfg.min_tail = value.get<std::size_t>();
            else if (key == "year_lo") cfg.year_lo = value.get<int>();
            else if (key == "year_hi") cfg.year_hi = value.get<int>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "min_coverage") cfg.min_coverage = value.get<double>();
            else if (key == "theil_slots") cfg.theil_slots = value.get<std::size_t>();
            else if (key == "theil_mode") {
                const auto mode = value.get<std::string>();
                if (mode == "fixed_slots") cfg.theil_mode = TheilMode::fixed_slots;
                else if (mode == "nonzero_products") cfg.theil_mode = TheilMode::nonzero_products;
                else throw ConfigError("config: unknown theil_mode '" + mode + "'");
            } else if (key == "binning") {
                const auto mode = value.get<std::string>();
                if (mode == "per_pair") cfg.binning = BinningMode::per_pair;
                else if (mode == "global") cfg.binning = BinningMode::global;
                else throw ConfigError("config: unknown binning '" + mode + "'");
            } else {
                throw ConfigError("config " + path + ": unknown key '" + key + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    validate_config(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Period splitting
// ---------------------------------------------------------------------------

std::vector<PricePanel> split_periods(const PricePanel& panel, std::size_t k,
                                      std::vector<std::string>* log) {
    if (k < 1) throw ConfigError("split_periods: k must be >= 1");
    const std::size_t days = panel.day_count();
    if (k > days)
        throw LengthError("split_periods: k = " + std::to_string(k) +
                          " exceeds day count " + std::to_string(days));
    const std::size_t base = days / k;
    const std::size_t remainder = days - base * k;
    if (remainder != 0 && log)
        log->push_back("split_periods: " + std::to_string(remainder) +
                       " remainder day(s) extend the final period");
    std::vector<PricePanel> out;
    out.reserve(k);
    std::size_t start = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t stop = (i + 1 == k) ? days : start + base;
        out.push_back(panel.slice_days(start, stop));
        start = stop;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-span analysis
// ---------------------------------------------------------------------------

namespace {

std::vector<CcdfPoint> subsample_ccdf(const Ccdf& ccdf, std::size_t cap = 200) {
    const auto& pts = ccdf.points;
    if (pts.size() <= cap) return pts;
    std::vector<CcdfPoint> out;
    out.reserve(cap);
    const double step =
        static_cast<double>(pts.size() - 1) / static_cast<double>(cap - 1);
    std::size_t prev = pts.size();
    for (std::size_t i = 0; i < cap; ++i) {
        auto idx = static_cast<std::size_t>(step * static_cast<double>(i) + 0.5);
        idx = std::min(idx, pts.size() - 1);
        if (idx != prev) out.push_back(pts[idx]);
        prev = idx;
    }
    return out;
}

TailRecord fit_one_tail(std::span<const double> sample, TailSide side,
                        const TailOptions& opts) {
    TailRecord rec;
    try {
        rec.fit = select_xmin(sample, opts);
        rec.fit.side = side;
        rec.ok = true;
    } catch (const Error& e) {
        rec.error = e.what();
    }
    return rec;
}

const Segment* longest_segment(const std::vector<Segment>& segments) {
    const Segment* best = nullptr;
    for (const auto& seg : segments)
        if (!best || seg.length() > best->length()) best = &seg;
    return best;
}

struct SpanContext {
    const AnalysisConfig& cfg;
    int year_lo;
    int year_hi;
    const MacroTable* macro;     // nullptr when no macro inputs configured
    bool evaluate_refs;
    const double* period_threshold;  // expected cut height for this period
};

SpanReport analyze_span(const PricePanel& panel, const std::string& name,
                        const SpanContext& ctx) {
    SpanReport span;
    span.name = name;
    span.day_count = panel.day_count();
    span.start = panel.dates().front();
    span.end = panel.dates().back();

    // Currencies in code order so the report layout is input-order independent.
    std::vector<std::size_t> order(panel.currency_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return panel.meta(a).code < panel.meta(b).code;
    });

    const TailOptions tail_opts{ctx.cfg.min_tail, 500};
    std::vector<std::vector<double>> normalized_samples(order.size());

    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const std::size_t row_idx = order[oi];
        const CurrencyMeta& meta = panel.meta(row_idx);
        CurrencyResult rec;
        rec.code = meta.code;
        rec.market_class = meta.market_class;
        rec.regime = meta.regime;
        rec.region = meta.region;

        const auto row = panel.row(row_idx);
        const auto segments = contiguous_segments(row);

        ReturnSeries returns;
        bool have_returns = false;
        try {
            returns = segment_log_returns(row);
            have_returns = true;
            rec.n_returns = returns.values.size();
        } catch (const Error& e) {
            rec.warnings.push_back(std::string("returns: ") + e.what());
        }

        if (have_returns) {
            try {
                NormalizedReturns normalized = normalize_returns(returns);
                rec.moments = moments(normalized.values);
                rec.has_moments = true;

                std::vector<double> pos, neg;
                for (double r : normalized.values) {
                    if (r > 0.0) pos.push_back(r);
                    else if (r < 0.0) neg.push_back(-r);
                }
                rec.tail_pos = fit_one_tail(pos, TailSide::positive, tail_opts);
                rec.tail_neg = fit_one_tail(neg, TailSide::negative, tail_opts);
                if (!pos.empty()) rec.ccdf_pos = subsample_ccdf(empirical_ccdf(pos));
                if (!neg.empty()) rec.ccdf_neg = subsample_ccdf(empirical_ccdf(neg));

                normalized_samples[oi] = std::move(normalized.values);
            } catch (const Error& e) {
                rec.warnings.push_back(std::string("normalize: ") + e.what());
            }
        }

        if (const Segment* seg = longest_segment(segments)) {
            std::vector<double> profile;
            profile.reserve(seg->length());
            for (std::size_t t = seg->start; t < seg->stop; ++t)
                profile.push_back(std::log(row[t]));

            if (profile.size() >= 40) {
                try {
                    const auto sizes = log_spaced_sizes(10, profile.size() / 4,
                                                        ctx.cfg.dfa_window_count);
                    const DfaResult dfa_res = dfa(profile, sizes);
                    rec.has_dfa = true;
                    rec.dfa_exponent = dfa_res.exponent;
                    rec.dfa_r2 = dfa_res.fit_r2;
                    rec.dfa_sizes = dfa_res.window_sizes;
                    rec.dfa_f = dfa_res.fluctuation;
                } catch (const Error& e) {
                    rec.warnings.push_back(std::string("dfa: ") + e.what());
                }
            } else {
                rec.warnings.push_back("dfa: longest segment too short");
            }

            try {
                const ReturnSeries seg_returns = log_returns(
                    std::span<const double>(row.data() + seg->start, seg->length()));
                const VrResult vr_res = variance_ratio(seg_returns.values, ctx.cfg.vr_lag);
                rec.has_vr = true;
                rec.vr = vr_res.vr;
            } catch (const Error& e) {
                rec.warnings.push_back(std::string("vr: ") + e.what());
            }
        } else {
            rec.warnings.push_back("no contiguous data in span");
        }

        span.currencies.push_back(std::move(rec));
    }

    // Cross-sectional tail summaries and the kurtosis-exponent relation.
    {
        std::vector<TailFit> fits_pos, fits_neg;
        std::vector<KurtosisExponentPoint> points_pos, points_neg;
        std::vector<double> skews;
        std::vector<MarketClass> classes;
        for (const CurrencyResult& rec : span.currencies) {
            if (rec.tail_pos.ok) fits_pos.push_back(rec.tail_pos.fit);
            if (rec.tail_neg.ok) fits_neg.push_back(rec.tail_neg.fit);
            if (rec.has_moments) {
                skews.push_back(rec.moments.skewness);
                classes.push_back(rec.market_class);
                if (rec.moments.kurtosis > 1.0) {
                    if (rec.tail_pos.ok && rec.tail_pos.fit.gamma > 0.0)
                        points_pos.push_back(
                            {rec.code, rec.tail_pos.fit.gamma, rec.moments.kurtosis});
                    if (rec.tail_neg.ok && rec.tail_neg.fit.gamma > 0.0)
                        points_neg.push_back(
                            {rec.code, rec.tail_neg.fit.gamma, rec.moments.kurtosis});
                } else {
                    span.cross.warnings.push_back(
                        rec.code + ": alpha4 <= 1, excluded from kurtosis-exponent fit");
                }
            }
        }
        if (!fits_pos.empty()) {
            span.cross.gamma_pos = tail_exponent_summary(fits_pos);
            span.cross.has_gamma_pos = true;
        }
        if (!fits_neg.empty()) {
            span.cross.gamma_neg = tail_exponent_summary(fits_neg);
            span.cross.has_gamma_neg = true;
        }
        if (points_pos.size() >= 3) {
            try {
                span.cross.kurt_fit_pos = fit_kurtosis_exponent_relation(points_pos);
                span.cross.has_kurt_fit_pos = true;
            } catch (const Error& e) {
                span.cross.warnings.push_back(std::string("kurtosis fit (pos): ") + e.what());
            }
        }
        if (points_neg.size() >= 3) {
            try {
                span.cross.kurt_fit_neg = fit_kurtosis_exponent_relation(points_neg);
                span.cross.has_kurt_fit_neg = true;
            } catch (const Error& e) {
                span.cross.warnings.push_back(std::string("kurtosis fit (neg): ") + e.what());
            }
        }
        if (!skews.empty()) {
            for (const auto& [cls, stat] : group_skewness(skews, classes))
                span.cross.skewness_by_class.push_back(
                    {to_string(cls), stat.mean, stat.sd, stat.count});
        }
    }

    // Macro section: span-year indicator means, correlations, regression.
    if (ctx.macro) {
        MacroTable table = *ctx.macro;
        compute_means(table, ctx.year_lo, ctx.year_hi, ctx.cfg.theil_slots,
                      ctx.cfg.theil_mode, span.macro.warnings);
        for (CurrencyResult& rec : span.currencies) {
            auto it = table.records.find(rec.code);
            if (it == table.records.end()) continue;
            if (it->second.has_g) {
                rec.has_g = true;
                rec.g_mean = it->second.g_mean;
            }
            if (it->second.has_theil) {
                rec.has_theil = true;
                rec.theil_mean = it->second.theil_mean;
            }
        }

        std::vector<double> g_x, g_y, t_x, t_y, m_a, m_g, m_t;
        for (const CurrencyResult& rec : span.currencies) {
            if (rec.has_g || rec.has_theil) ++span.macro.n_matched;
            if (!rec.has_moments || rec.moments.kurtosis <= 0.0) continue;
            const bool g_ok = rec.has_g && rec.g_mean > 0.0;
            const bool t_ok = rec.has_theil && rec.theil_mean > 0.0;
            if (g_ok) {
                g_x.push_back(rec.g_mean);
                g_y.push_back(rec.moments.kurtosis);
            }
            if (t_ok) {
                t_x.push_back(rec.theil_mean);
                t_y.push_back(rec.moments.kurtosis);
            }
            if (g_ok && t_ok) {
                m_a.push_back(rec.moments.kurtosis);
                m_g.push_back(rec.g_mean);
                m_t.push_back(rec.theil_mean);
            }
        }
        if (g_x.size() >= 3) {
            try {
                span.macro.g_corr = log_pearson(g_x, g_y);
                span.macro.g_fit = loglog_power_fit(g_x, g_y);
                span.macro.has_g_corr = true;
            } catch (const Error& e) {
                span.macro.warnings.push_back(std::string("gdp fit: ") + e.what());
            }
        }
        if (t_x.size() >= 3) {
            try {
                span.macro.theil_corr = log_pearson(t_x, t_y);
                span.macro.theil_fit = loglog_power_fit(t_x, t_y);
                span.macro.has_theil_corr = true;
            } catch (const Error& e) {
                span.macro.warnings.push_back(std::string("theil fit: ") + e.what());
            }
        }
        if (m_a.size() >= 4) {
            try {
                span.macro.regression = multilinear_fit(m_a, m_g, m_t);
                span.macro.has_regression = true;
            } catch (const Error& e) {
                span.macro.warnings.push_back(std::string("regression: ") + e.what());
            }
        }
    }

    // Similarity distances and clustering over the usable normalized samples.
    {
        std::vector<std::string> codes;
        std::vector<std::vector<double>> samples;
        for (std::size_t oi = 0; oi < order.size(); ++oi) {
            if (normalized_samples[oi].empty()) continue;
            codes.push_back(span.currencies[oi].code);
            samples.push_back(std::move(normalized_samples[oi]));
        }
        try {
            span.clusters.distance =
                distance_matrix(codes, samples, ctx.cfg.bins, ctx.cfg.binning);
            for (const std::string& note : span.clusters.distance.excluded)
                span.clusters.warnings.push_back("excluded " + note);
            span.clusters.dendrogram =
                agglomerate(span.clusters.distance, ctx.cfg.linkage);
            span.clusters.cut = max_cluster_cut(span.clusters.dendrogram);
            span.clusters.linkage = to_string(ctx.cfg.linkage);
            span.clusters.has = true;
        } catch (const Error& e) {
            span.clusters.warnings.push_back(std::string("clustering: ") + e.what());
        }
    }

    // Reference diagnostics, only when the panel is full-study-shaped.
    if (ctx.evaluate_refs) {
        ReferenceInputs inputs;
        if (span.cross.has_gamma_pos) inputs.median_gamma_pos = span.cross.gamma_pos.median;
        if (span.cross.has_gamma_neg) inputs.median_gamma_neg = span.cross.gamma_neg.median;
        if (span.cross.has_kurt_fit_pos) {
            inputs.kurtosis_fit_a_pos = span.cross.kurt_fit_pos.a;
            inputs.kurtosis_fit_beta_pos = span.cross.kurt_fit_pos.beta;
            inputs.rho_alpha4_gamma_pos = span.cross.kurt_fit_pos.rho;
        }
        if (span.cross.has_kurt_fit_neg) {
            inputs.kurtosis_fit_a_neg = span.cross.kurt_fit_neg.a;
            inputs.kurtosis_fit_beta_neg = span.cross.kurt_fit_neg.beta;
            inputs.rho_alpha4_gamma_neg = span.cross.kurt_fit_neg.rho;
        }
        if (span.macro.has_g_corr) {
            inputs.rho_alpha4_g = span.macro.g_corr.rho;
            inputs.exponent_alpha4_g = span.macro.g_fit.exponent;
        }
        if (span.macro.has_theil_corr) {
            inputs.rho_alpha4_theil = span.macro.theil_corr.rho;
            inputs.exponent_alpha4_theil = span.macro.theil_fit.exponent;
        }
        if (span.macro.has_regression) {
            inputs.regression_b0 = span.macro.regression.b0;
            inputs.regression_b1 = span.macro.regression.b1;
            inputs.regression_b2 = span.macro.regression.b2;
            inputs.regression_r2 = span.macro.regression.r2;
        }
        if (span.clusters.has && !ctx.period_threshold) {
            inputs.cut_threshold = span.clusters.cut.threshold;
            inputs.n_nontrivial_clusters =
                static_cast<double>(span.clusters.cut.n_nontrivial);
        }
        span.benchmarks = evaluate_benchmarks(inputs);
        if (ctx.period_threshold && span.clusters.has) {
            BenchmarkOutcome o;
            o.name = "cut_threshold";
            o.expected = *ctx.period_threshold;
            o.tolerance = 0.15;
            o.actual = span.clusters.cut.threshold;
            o.within = std::abs(o.actual - o.expected) <= o.tolerance;
            span.benchmarks.push_back(o);
        }
    }

    return span;
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Run
// ---------------------------------------------------------------------------

Report run_analysis(const AnalysisConfig& cfg) {
    validate_config(cfg);

    Report report;
    report.config = cfg;
    report.generated_at = timestamp_utc();

    PanelLoadOptions load_opts;
    load_opts.min_coverage = cfg.min_coverage;
    PricePanel panel =
        load_price_panel(cfg.panel_path, load_opts, &report.panel_exclusions);

    if (!cfg.metadata_path.empty()) {
        std::vector<std::string> unmatched;
        panel = apply_metadata(panel, load_metadata(cfg.metadata_path), &unmatched);
        for (const std::string& code : unmatched)
            report.warnings.push_back("no metadata for " + code);
    }

    MacroTable macro;
    bool have_macro = false;
    if (!cfg.gdp_path.empty()) {
        load_gdp_csv(cfg.gdp_path, macro);
        have_macro = true;
    }
    if (!cfg.exports_path.empty()) {
        load_exports_csv(cfg.exports_path, macro);
        have_macro = true;
    }
    if (!cfg.theil_path.empty()) {
        load_theil_csv(cfg.theil_path, macro);
        have_macro = true;
    }

    const bool refs =
        matches_reference_shape(panel.currency_count(), panel.day_count());

    SpanContext full_ctx{cfg, cfg.year_lo, cfg.year_hi,
                         have_macro ? &macro : nullptr, refs, nullptr};
    report.full = analyze_span(panel, "full", full_ctx);

    const auto period_panels = split_periods(panel, cfg.period_count, &report.warnings);
    for (std::size_t i = 0; i < period_panels.size(); ++i) {
        const PricePanel& sub = period_panels[i];
        int ylo = std::max(cfg.year_lo, sub.dates().front().year);
        int yhi = std::min(cfg.year_hi, sub.dates().back().year);
        if (ylo > yhi) {
            ylo = cfg.year_lo;
            yhi = cfg.year_hi;
        }
        const double* threshold = nullptr;
        if (refs && cfg.period_count == reference_period_thresholds().size())
            threshold = &reference_period_thresholds()[i];
        SpanContext ctx{cfg, ylo, yhi, have_macro ? &macro : nullptr, refs, threshold};
        report.periods.push_back(
            analyze_span(sub, "period" + std::to_string(i + 1), ctx));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

std::string report_to_json(const Report& report) {
    const json j = report;
    return j.dump(1) + "\n";
}

Report report_from_json(const std::string& text) {
    try {
        return json::parse(text).get<Report>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("report JSON: ") + e.what());
    }
}

void save_report(const Report& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << report_to_json(report);
    if (!out) throw IoError("write failed: " + path);
}

Report load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::string cell(bool present, double v) { return present ? format_double(v) : ""; }

void render_span(const SpanReport& span, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    {
        const auto path = dir / "per_currency.csv";
        auto out = open_out(path);
        out << "code,market_class,regime,region,n_returns,mean,std,skewness,"
               "kurtosis,gamma_pos,x_min_pos,n_tail_pos,ks_pos,stderr_pos,"
               "gamma_neg,x_min_neg,n_tail_neg,ks_neg,stderr_neg,"
               "dfa_exponent,dfa_r2,vr,g_mean,theil_mean\n";
        for (const CurrencyResult& rec : span.currencies) {
            out << rec.code << ',' << to_string(rec.market_class) << ','
                << to_string(rec.regime) << ',' << rec.region << ','
                << rec.n_returns << ',' << cell(rec.has_moments, rec.moments.mean)
                << ',' << cell(rec.has_moments, rec.moments.std) << ','
                << cell(rec.has_moments, rec.moments.skewness) << ','
                << cell(rec.has_moments, rec.moments.kurtosis) << ','
                << cell(rec.tail_pos.ok, rec.tail_pos.fit.gamma) << ','
                << cell(rec.tail_pos.ok, rec.tail_pos.fit.x_min) << ','
                << (rec.tail_pos.ok ? std::to_string(rec.tail_pos.fit.n_tail) : "")
                << ',' << cell(rec.tail_pos.ok, rec.tail_pos.fit.ks) << ','
                << cell(rec.tail_pos.ok, rec.tail_pos.fit.stderr_gamma) << ','
                << cell(rec.tail_neg.ok, rec.tail_neg.fit.gamma) << ','
                << cell(rec.tail_neg.ok, rec.tail_neg.fit.x_min) << ','
                << (rec.tail_neg.ok ? std::to_string(rec.tail_neg.fit.n_tail) : "")
                << ',' << cell(rec.tail_neg.ok, rec.tail_neg.fit.ks) << ','
                << cell(rec.tail_neg.ok, rec.tail_neg.fit.stderr_gamma) << ','
                << cell(rec.has_dfa, rec.dfa_exponent) << ','
                << cell(rec.has_dfa, rec.dfa_r2) << ',' << cell(rec.has_vr, rec.vr)
                << ',' << cell(rec.has_g, rec.g_mean) << ','
                << cell(rec.has_theil, rec.theil_mean) << '\n';
        }
        finish(out, path);
    }

    {
        const auto path = dir / "ccdf.csv";
        auto out = open_out(path);
        out << "code,side,x,pc\n";
        for (const CurrencyResult& rec : span.currencies) {
            for (const CcdfPoint& p : rec.ccdf_pos)
                out << rec.code << ",positive," << format_double(p.x) << ','
                    << format_double(p.pc) << '\n';
            for (const CcdfPoint& p : rec.ccdf_neg)
                out << rec.code << ",negative," << format_double(p.x) << ','
                    << format_double(p.pc) << '\n';
        }
        finish(out, path);
    }

    {
        const auto path = dir / "dfa.csv";
        auto out = open_out(path);
        out << "code,s,f\n";
        for (const CurrencyResult& rec : span.currencies)
            for (std::size_t i = 0; i < rec.dfa_sizes.size(); ++i)
                out << rec.code << ',' << rec.dfa_sizes[i] << ','
                    << format_double(rec.dfa_f[i]) << '\n';
        finish(out, path);
    }

    {
        const auto path = dir / "scatter_gamma_alpha4.csv";
        auto out = open_out(path);
        out << "code,gamma_pos,gamma_neg,alpha4\n";
        for (const CurrencyResult& rec : span.currencies) {
            if (!rec.tail_pos.ok && !rec.tail_neg.ok && !rec.has_moments) continue;
            out << rec.code << ',' << cell(rec.tail_pos.ok, rec.tail_pos.fit.gamma)
                << ',' << cell(rec.tail_neg.ok, rec.tail_neg.fit.gamma) << ','
                << cell(rec.has_moments, rec.moments.kurtosis) << '\n';
        }
        finish(out, path);
    }

    {
        const auto path = dir / "scatter_macro.csv";
        auto out = open_out(path);
        out << "code,g_mean,theil_mean,alpha4\n";
        for (const CurrencyResult& rec : span.currencies) {
            if (!rec.has_g && !rec.has_theil) continue;
            out << rec.code << ',' << cell(rec.has_g, rec.g_mean) << ','
                << cell(rec.has_theil, rec.theil_mean) << ','
                << cell(rec.has_moments, rec.moments.kurtosis) << '\n';
        }
        finish(out, path);
    }

    {
        const auto path = dir / "distance_matrix.csv";
        auto out = open_out(path);
        out << "code";
        if (span.clusters.has)
            for (const std::string& code : span.clusters.distance.codes)
                out << ',' << code;
        out << '\n';
        if (span.clusters.has) {
            const auto& dm = span.clusters.distance;
            for (std::size_t i = 0; i < dm.size(); ++i) {
                out << dm.codes[i];
                for (std::size_t j = 0; j < dm.size(); ++j)
                    out << ',' << format_double(dm.d[i][j]);
                out << '\n';
            }
        }
        finish(out, path);
    }

    {
        const auto path = dir / "dendrogram.nwk";
        auto out = open_out(path);
        if (span.clusters.has) out << export_newick(span.clusters.dendrogram) << '\n';
        finish(out, path);
    }

    {
        const auto path = dir / "clusters.csv";
        auto out = open_out(path);
        out << "code,cluster_id\n";
        if (span.clusters.has) {
            const auto& cut = span.clusters.cut;
            for (std::size_t leaf = 0; leaf < cut.labels.size(); ++leaf)
                out << span.clusters.dendrogram.leaves[leaf] << ',' << cut.labels[leaf]
                    << '\n';
        }
        finish(out, path);
    }
}

}  // namespace

void render_report(const Report& report, const std::string& outdir) {
    const std::filesystem::path root(outdir);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw IoError("cannot create " + root.string() + ": " + ec.message());

    save_report(report, (root / "report.json").string());
    render_span(report.full, root / report.full.name);
    for (const SpanReport& span : report.periods)
        render_span(span, root / span.name);
}

}  // namespace fxtails
