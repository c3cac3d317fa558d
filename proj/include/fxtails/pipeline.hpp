#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fxtails/clustering.hpp"
#include "fxtails/macro.hpp"
#include "fxtails/panel.hpp"
#include "fxtails/reference.hpp"
#include "fxtails/returns.hpp"
#include "fxtails/scaling.hpp"
#include "fxtails/similarity.hpp"
#include "fxtails/tails.hpp"

namespace fxtails {

inline constexpr const char* kToolVersion = "0.1.0";

struct AnalysisConfig {
    std::string panel_path;
    std::string metadata_path;  // optional inputs: empty string = not given
    std::string gdp_path;
    std::string exports_path;
    std::string theil_path;
    std::string outdir = "out";
    std::size_t period_count = 3;
    std::size_t bins = 1000;
    std::size_t vr_lag = 10;
    std::size_t dfa_window_count = 12;
    Linkage linkage = Linkage::complete;
    std::size_t min_tail = 50;
    int year_lo = 1995;
    int year_hi = 2012;
    std::uint64_t seed = 1;
    double min_coverage = 0.8;
    std::size_t theil_slots = kDefaultProductSlots;
    TheilMode theil_mode = TheilMode::fixed_slots;
    BinningMode binning = BinningMode::per_pair;

    bool operator==(const AnalysisConfig&) const = default;
};

// Reads a JSON config file. Unknown keys and out-of-range values raise
// ConfigError; a missing "panel" key does too.
AnalysisConfig load_config(const std::string& path);

struct TailRecord {
    bool ok = false;
    std::string error;
    TailFit fit;
};

// Everything computed for one currency within one span. has_* flags gate the
// value fields; absent values stay zero so the report never carries NaNs.
struct CurrencyResult {
    std::string code;
    MarketClass market_class = MarketClass::developed;
    Regime regime = Regime::floating;
    std::string region;
    std::size_t n_returns = 0;
    bool has_moments = false;
    Moments moments;  // of the normalized returns
    TailRecord tail_pos;
    TailRecord tail_neg;
    bool has_dfa = false;
    double dfa_exponent = 0.0;
    double dfa_r2 = 0.0;
    std::vector<std::size_t> dfa_sizes;
    std::vector<double> dfa_f;
    bool has_vr = false;
    double vr = 0.0;
    bool has_g = false;
    double g_mean = 0.0;  // span-year average GDP per capita
    bool has_theil = false;
    double theil_mean = 0.0;
    std::vector<CcdfPoint> ccdf_pos;  // subsampled, plot-ready
    std::vector<CcdfPoint> ccdf_neg;
    std::vector<std::string> warnings;
};

struct GroupSkewRow {
    std::string market_class;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t count = 0;
};

struct CrossSection {
    bool has_gamma_pos = false;
    TailSummary gamma_pos;
    bool has_gamma_neg = false;
    TailSummary gamma_neg;
    bool has_kurt_fit_pos = false;
    KurtosisExponentFit kurt_fit_pos;
    bool has_kurt_fit_neg = false;
    KurtosisExponentFit kurt_fit_neg;
    std::vector<GroupSkewRow> skewness_by_class;
    std::vector<std::string> warnings;
};

struct MacroSection {
    std::size_t n_matched = 0;
    bool has_g_corr = false;
    CorrelationResult g_corr;
    PowerFit g_fit;
    bool has_theil_corr = false;
    CorrelationResult theil_corr;
    PowerFit theil_fit;
    bool has_regression = false;
    RegressionFit regression;
    std::vector<std::string> warnings;
};

struct ClusterSection {
    bool has = false;
    std::string linkage;
    DistanceMatrix distance;
    Dendrogram dendrogram;
    ClusterCut cut;  // max_cluster_cut result
    std::vector<std::string> warnings;
};

struct SpanReport {
    std::string name;  // "full", "period1", ...
    Date start;        // inclusive
    Date end;          // inclusive
    std::size_t day_count = 0;
    std::vector<CurrencyResult> currencies;  // sorted by code
    CrossSection cross;
    MacroSection macro;
    ClusterSection clusters;
    std::vector<BenchmarkOutcome> benchmarks;
    std::vector<std::string> warnings;
};

struct Report {
    std::string version = kToolVersion;
    std::string generated_at;  // wall-clock stamp; the one nondeterministic field
    AnalysisConfig config;
    std::vector<std::string> panel_exclusions;
    std::vector<std::string> warnings;
    SpanReport full;
    std::vector<SpanReport> periods;
};

// k contiguous slices of floor(T/k) days; remainder days extend the last
// slice (noted in *log). Throws LengthError when k exceeds the day count.
std::vector<PricePanel> split_periods(const PricePanel& panel, std::size_t k,
                                      std::vector<std::string>* log = nullptr);

// Full analysis: ingest, per-currency statistics per span, cross-sectional
// fits, macro regressions, clustering, reference diagnostics. Per-currency
// failures become warnings; only unreadable inputs or an unusable panel
// throw. Deterministic given the config.
Report run_analysis(const AnalysisConfig& config);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
void save_report(const Report& report, const std::string& path);
Report load_report(const std::string& path);

// Writes report.json plus, per span subdirectory, the plot-ready files:
//   per_currency.csv, ccdf.csv, dfa.csv, scatter_gamma_alpha4.csv,
//   scatter_macro.csv, distance_matrix.csv, dendrogram.nwk, clusters.csv
// Re-rendering overwrites in place.
void render_report(const Report& report, const std::string& outdir);

}  // namespace fxtails
