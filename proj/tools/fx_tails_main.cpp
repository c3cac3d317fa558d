// fx-tails: fluctuation analysis of exchange-rate panels.
//
// Exit codes: 0 success, 1 fatal input error, 2 configuration error.
// FXTAILS_LOG=quiet|info|debug controls stderr verbosity (default info).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fxtails/clustering.hpp"
#include "fxtails/csv.hpp"
#include "fxtails/errors.hpp"
#include "fxtails/macro.hpp"
#include "fxtails/panel.hpp"
#include "fxtails/pipeline.hpp"
#include "fxtails/returns.hpp"
#include "fxtails/scaling.hpp"
#include "fxtails/similarity.hpp"
#include "fxtails/stats.hpp"
#include "fxtails/synth.hpp"
#include "fxtails/tails.hpp"

namespace {

using namespace fxtails;

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("FXTAILS_LOG");
        if (!env) return 1;
        const std::string v(env);
        if (v == "quiet" || v == "0") return 0;
        if (v == "debug" || v == "2") return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[fx-tails] " << msg << '\n';
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[fx-tails] " << msg << '\n';
}

struct PeriodOpts {
    std::size_t period = 0;  // 0 = full span
    std::size_t period_count = 3;
};

void add_period_options(CLI::App* cmd, PeriodOpts& opts) {
    cmd->add_option("--period", opts.period,
                    "Analyze sub-period N (1-based) instead of the full span");
    cmd->add_option("--periods", opts.period_count,
                    "Number of equal sub-periods (default 3)");
}

PricePanel slice_period(PricePanel panel, const PeriodOpts& opts) {
    if (opts.period == 0) return panel;
    if (opts.period_count < 1 || opts.period > opts.period_count)
        throw ConfigError("--period must be in [1, --periods]");
    auto panels = split_periods(panel, opts.period_count);
    PricePanel sub = std::move(panels[opts.period - 1]);
    log_info("period " + std::to_string(opts.period) + ": " +
             sub.dates().front().to_string() + " .. " + sub.dates().back().to_string());
    return sub;
}

PricePanel load_panel_checked(const std::string& path, double min_coverage,
                              bool keep_all) {
    PanelLoadOptions opts;
    opts.min_coverage = min_coverage;
    opts.apply_coverage_filter = !keep_all;
    std::vector<std::string> excluded;
    PricePanel panel = load_price_panel(path, opts, &excluded);
    for (const std::string& note : excluded) log_info("excluded " + note);
    return panel;
}

std::vector<double> normalized_sample(const PricePanel& panel, const std::string& code) {
    const auto idx = panel.index_of(code);
    if (!idx) throw ValidationError("unknown currency code '" + code + "'");
    const ReturnSeries returns = segment_log_returns(panel.row(*idx));
    return normalize_returns(returns).values;
}

void print_tail_fit(const TailFit& fit) {
    std::cout << to_string(fit.side) << " tail: gamma=" << format_double(fit.gamma)
              << " alpha=" << format_double(fit.alpha)
              << " x_min=" << format_double(fit.x_min) << " n_tail=" << fit.n_tail
              << " ks=" << format_double(fit.ks)
              << " stderr=" << format_double(fit.stderr_gamma) << '\n';
}

// --- subcommand bodies -----------------------------------------------------

int cmd_run(const std::string& config_path, const std::string& outdir_override) {
    AnalysisConfig cfg = load_config(config_path);
    if (!outdir_override.empty()) cfg.outdir = outdir_override;
    log_info("running analysis from " + config_path);
    Report report = run_analysis(cfg);
    render_report(report, cfg.outdir);
    std::cout << "panel: " << report.full.currencies.size() << " currencies, "
              << report.full.day_count << " days ("
              << report.full.start.to_string() << " .. "
              << report.full.end.to_string() << ")\n";
    for (const std::string& note : report.panel_exclusions)
        std::cout << "excluded: " << note << '\n';
    auto span_line = [](const SpanReport& span) {
        std::cout << span.name << ": ";
        if (span.cross.has_gamma_pos)
            std::cout << "median gamma+ " << format_double(span.cross.gamma_pos.median);
        if (span.cross.has_gamma_neg)
            std::cout << ", median gamma- " << format_double(span.cross.gamma_neg.median);
        if (span.clusters.has)
            std::cout << ", d_th " << format_double(span.clusters.cut.threshold)
                      << " (" << span.clusters.cut.n_nontrivial << " clusters)";
        std::cout << '\n';
    };
    span_line(report.full);
    for (const SpanReport& span : report.periods) span_line(span);
    std::cout << "report written to " << cfg.outdir << '\n';
    return 0;
}

int cmd_ingest_check(const std::string& panel_path, const std::string& metadata_path,
                     double min_coverage, bool keep_all) {
    PricePanel panel = load_panel_checked(panel_path, min_coverage, keep_all);
    if (!metadata_path.empty()) {
        std::vector<std::string> unmatched;
        panel = apply_metadata(panel, load_metadata(metadata_path), &unmatched);
        for (const std::string& code : unmatched)
            log_info("no metadata for " + code);
    }
    std::cout << "currencies: " << panel.currency_count() << '\n'
              << "days: " << panel.day_count() << '\n'
              << "range: " << panel.dates().front().to_string() << " .. "
              << panel.dates().back().to_string() << '\n';
    for (std::size_t i = 0; i < panel.currency_count(); ++i)
        log_debug(panel.meta(i).code + " coverage " + format_double(panel.coverage(i)));
    std::cout << "ok\n";
    return 0;
}

int cmd_tails(const std::string& panel_path, const std::string& code,
              const std::string& side, std::size_t min_tail, const PeriodOpts& period) {
    PricePanel panel = slice_period(load_panel_checked(panel_path, 0.8, false), period);
    const std::vector<double> sample = normalized_sample(panel, code);
    std::vector<double> pos, neg;
    for (double r : sample) {
        if (r > 0.0) pos.push_back(r);
        else if (r < 0.0) neg.push_back(-r);
    }
    TailOptions opts;
    opts.min_tail = min_tail;
    std::cout << code << ": " << sample.size() << " normalized returns\n";
    if (side == "both" || side == "positive") {
        TailFit fit = select_xmin(pos, opts);
        fit.side = TailSide::positive;
        print_tail_fit(fit);
    }
    if (side == "both" || side == "negative") {
        TailFit fit = select_xmin(neg, opts);
        fit.side = TailSide::negative;
        print_tail_fit(fit);
    }
    return 0;
}

int cmd_scaling(const std::string& panel_path, const std::string& code,
                std::size_t vr_lag, std::size_t dfa_windows, const PeriodOpts& period) {
    PricePanel panel = slice_period(load_panel_checked(panel_path, 0.8, false), period);
    const auto idx = panel.index_of(code);
    if (!idx) throw ValidationError("unknown currency code '" + code + "'");
    const auto row = panel.row(*idx);
    const auto segments = contiguous_segments(row);
    const Segment* longest = nullptr;
    for (const auto& seg : segments)
        if (!longest || seg.length() > longest->length()) longest = &seg;
    if (!longest) throw LengthError(code + ": no contiguous data");

    std::vector<double> profile;
    profile.reserve(longest->length());
    for (std::size_t t = longest->start; t < longest->stop; ++t)
        profile.push_back(std::log(row[t]));

    const auto sizes = log_spaced_sizes(10, profile.size() / 4, dfa_windows);
    const DfaResult res = dfa(profile, sizes);
    std::cout << code << " dfa: exponent=" << format_double(res.exponent)
              << " r2=" << format_double(res.fit_r2) << '\n';
    for (std::size_t i = 0; i < res.window_sizes.size(); ++i)
        log_debug("F(" + std::to_string(res.window_sizes[i]) + ") = " +
                  format_double(res.fluctuation[i]));

    const ReturnSeries returns = log_returns(
        std::span<const double>(row.data() + longest->start, longest->length()));
    const VrResult vr = variance_ratio(returns.values, vr_lag);
    std::cout << code << " vr(l=" << vr.lag << "): " << format_double(vr.vr) << '\n';
    return 0;
}

void write_distance_csv(const DistanceMatrix& dm, std::ostream& out) {
    out << "code";
    for (const std::string& code : dm.codes) out << ',' << code;
    out << '\n';
    for (std::size_t i = 0; i < dm.size(); ++i) {
        out << dm.codes[i];
        for (std::size_t j = 0; j < dm.size(); ++j)
            out << ',' << format_double(dm.d[i][j]);
        out << '\n';
    }
}

DistanceMatrix panel_distance_matrix(const PricePanel& panel, std::size_t bins,
                                     BinningMode mode) {
    std::vector<std::string> codes;
    std::vector<std::vector<double>> samples;
    for (std::size_t i = 0; i < panel.currency_count(); ++i) {
        try {
            samples.push_back(normalized_sample(panel, panel.meta(i).code));
            codes.push_back(panel.meta(i).code);
        } catch (const Error& e) {
            log_info(panel.meta(i).code + ": skipped (" + std::string(e.what()) + ")");
        }
    }
    DistanceMatrix dm = distance_matrix(codes, samples, bins, mode);
    for (const std::string& note : dm.excluded) log_info("excluded " + note);
    return dm;
}

int cmd_similarity(const std::string& panel_path, std::size_t bins,
                   const std::string& binning, const std::string& out_path,
                   const PeriodOpts& period) {
    const BinningMode mode =
        binning == "global" ? BinningMode::global : BinningMode::per_pair;
    PricePanel panel = slice_period(load_panel_checked(panel_path, 0.8, false), period);
    const DistanceMatrix dm = panel_distance_matrix(panel, bins, mode);
    if (out_path.empty()) {
        write_distance_csv(dm, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write " + out_path);
        write_distance_csv(dm, out);
        log_info("distance matrix written to " + out_path);
    }
    return 0;
}

int cmd_cluster(const std::string& panel_path, const std::string& linkage,
                std::size_t bins, double threshold, const std::string& newick_out,
                const PeriodOpts& period) {
    PricePanel panel = slice_period(load_panel_checked(panel_path, 0.8, false), period);
    const DistanceMatrix dm = panel_distance_matrix(panel, bins, BinningMode::per_pair);
    const Dendrogram dend = agglomerate(dm, parse_linkage(linkage));
    const std::string newick = export_newick(dend);
    if (newick_out.empty()) {
        std::cout << newick << '\n';
    } else {
        std::ofstream out(newick_out);
        if (!out) throw IoError("cannot write " + newick_out);
        out << newick << '\n';
        log_info("dendrogram written to " + newick_out);
    }
    const ClusterCut cut =
        threshold > 0.0 ? cut_threshold(dend, threshold) : max_cluster_cut(dend);
    std::cout << "threshold: " << format_double(cut.threshold) << '\n'
              << "clusters with >= 2 members: " << cut.n_nontrivial << '\n';
    for (std::size_t c = 0; c < cut.clusters.size(); ++c) {
        std::cout << "cluster " << c << ':';
        for (std::size_t leaf : cut.clusters[c]) std::cout << ' ' << dend.leaves[leaf];
        std::cout << '\n';
    }
    return 0;
}

int cmd_macro(const std::string& gdp, const std::string& exports,
              const std::string& theil, int year_lo, int year_hi,
              std::size_t slots, const std::string& mode_name) {
    if (gdp.empty() && exports.empty() && theil.empty())
        throw ConfigError("macro: provide at least one of --gdp, --exports, --theil");
    const TheilMode mode = mode_name == "nonzero_products"
                               ? TheilMode::nonzero_products
                               : TheilMode::fixed_slots;
    MacroTable table;
    if (!gdp.empty()) load_gdp_csv(gdp, table);
    if (!exports.empty()) load_exports_csv(exports, table);
    if (!theil.empty()) load_theil_csv(theil, table);
    std::vector<std::string> warnings;
    compute_means(table, year_lo, year_hi, slots, mode, warnings);
    for (const std::string& w : warnings) log_info(w);
    std::cout << "code,g_mean,theil_mean\n";
    for (const auto& [code, rec] : table.records) {
        std::cout << code << ',' << (rec.has_g ? format_double(rec.g_mean) : "")
                  << ',' << (rec.has_theil ? format_double(rec.theil_mean) : "")
                  << '\n';
    }
    return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_path,
              const std::string& metadata_out, const std::string& gdp_out,
              const std::string& theil_out, int year_lo, int year_hi) {
    const auto specs = load_series_specs(spec_path);
    log_info("generating " + std::to_string(specs.size()) + " series");
    const PricePanel panel = gen_synthetic_panel(specs);
    save_price_panel(panel, out_path);
    std::cout << "panel: " << panel.currency_count() << " currencies, "
              << panel.day_count() << " days -> " << out_path << '\n';
    if (!metadata_out.empty()) {
        write_metadata_fixture(specs, metadata_out);
        std::cout << "metadata -> " << metadata_out << '\n';
    }
    if (!gdp_out.empty() || !theil_out.empty()) {
        if (gdp_out.empty() || theil_out.empty())
            throw ConfigError("synth: --gdp-out and --theil-out go together");
        write_macro_fixture(specs, gdp_out, theil_out, year_lo, year_hi);
        std::cout << "macro fixtures -> " << gdp_out << ", " << theil_out << '\n';
    }
    return 0;
}

int cmd_report(const std::string& report_path, const std::string& outdir) {
    const Report report = load_report(report_path);
    render_report(report, outdir);
    std::cout << "report rendered to " << outdir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fx-tails: fluctuation analysis for exchange-rate panels"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Full analysis from a JSON config");
    std::string run_config, run_outdir;
    run->add_option("--config", run_config, "JSON config file")->required();
    run->add_option("--outdir", run_outdir, "Override the configured output directory");

    // ingest-check
    auto* ingest = app.add_subcommand("ingest-check", "Validate a panel CSV");
    std::string ic_panel, ic_metadata;
    double ic_min_coverage = 0.8;
    bool ic_keep_all = false;
    ingest->add_option("--panel", ic_panel, "Panel CSV")->required();
    ingest->add_option("--metadata", ic_metadata, "Metadata CSV");
    ingest->add_option("--min-coverage", ic_min_coverage, "Coverage threshold (default 0.8)");
    ingest->add_flag("--keep-all", ic_keep_all, "Skip the coverage filter");

    // tails
    auto* tails = app.add_subcommand("tails", "Tail exponent fit for one currency");
    std::string t_panel, t_code, t_side = "both";
    std::size_t t_min_tail = 50;
    PeriodOpts t_period;
    tails->add_option("--panel", t_panel, "Panel CSV")->required();
    tails->add_option("--code", t_code, "Currency code")->required();
    tails->add_option("--side", t_side, "positive, negative, or both (default)")
        ->check(CLI::IsMember({"positive", "negative", "both"}));
    tails->add_option("--min-tail", t_min_tail, "Minimum tail size (default 50)");
    add_period_options(tails, t_period);

    // scaling
    auto* scaling = app.add_subcommand("scaling", "DFA and variance ratio for one currency");
    std::string s_panel, s_code;
    std::size_t s_vr_lag = 10, s_dfa_windows = 12;
    PeriodOpts s_period;
    scaling->add_option("--panel", s_panel, "Panel CSV")->required();
    scaling->add_option("--code", s_code, "Currency code")->required();
    scaling->add_option("--vr-lag", s_vr_lag, "Variance-ratio lag (default 10)");
    scaling->add_option("--dfa-windows", s_dfa_windows, "DFA window-size count (default 12)");
    add_period_options(scaling, s_period);

    // similarity
    auto* similarity = app.add_subcommand("similarity", "Pairwise distance matrix");
    std::string sim_panel, sim_binning = "per_pair", sim_out;
    std::size_t sim_bins = 1000;
    PeriodOpts sim_period;
    similarity->add_option("--panel", sim_panel, "Panel CSV")->required();
    similarity->add_option("--bins", sim_bins, "Histogram bins (default 1000)");
    similarity->add_option("--binning", sim_binning, "per_pair (default) or global")
        ->check(CLI::IsMember({"per_pair", "global"}));
    similarity->add_option("--out", sim_out, "Output CSV (default stdout)");
    add_period_options(similarity, sim_period);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Hierarchical clustering");
    std::string c_panel, c_linkage = "complete", c_newick;
    std::size_t c_bins = 1000;
    double c_threshold = 0.0;
    PeriodOpts c_period;
    cluster->add_option("--panel", c_panel, "Panel CSV")->required();
    cluster->add_option("--linkage", c_linkage, "complete (default), single, or average")
        ->check(CLI::IsMember({"complete", "single", "average"}));
    cluster->add_option("--bins", c_bins, "Histogram bins (default 1000)");
    cluster->add_option("--threshold", c_threshold,
                        "Cut height; omit to use the max-cluster criterion");
    cluster->add_option("--newick-out", c_newick, "Write the dendrogram here");
    add_period_options(cluster, c_period);

    // macro
    auto* macro = app.add_subcommand("macro", "Indicator means from macro CSVs");
    std::string m_gdp, m_exports, m_theil, m_mode = "fixed_slots";
    int m_year_lo = 1995, m_year_hi = 2012;
    std::size_t m_slots = 777;
    macro->add_option("--gdp", m_gdp, "GDP per capita CSV");
    macro->add_option("--exports", m_exports, "Export products CSV");
    macro->add_option("--theil", m_theil, "Precomputed Theil CSV");
    macro->add_option("--year-lo", m_year_lo, "First year (default 1995)");
    macro->add_option("--year-hi", m_year_hi, "Last year (default 2012)");
    macro->add_option("--slots", m_slots, "Theil product slots (default 777)");
    macro->add_option("--mode", m_mode, "fixed_slots (default) or nonzero_products")
        ->check(CLI::IsMember({"fixed_slots", "nonzero_products"}));

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic fixture panel");
    std::string sy_spec, sy_out, sy_metadata, sy_gdp, sy_theil;
    int sy_year_lo = 1995, sy_year_hi = 2012;
    synth->add_option("--spec", sy_spec, "Series spec file")->required();
    synth->add_option("--out", sy_out, "Output panel CSV")->required();
    synth->add_option("--metadata-out", sy_metadata, "Write metadata CSV here");
    synth->add_option("--gdp-out", sy_gdp, "Write GDP fixture CSV here");
    synth->add_option("--theil-out", sy_theil, "Write Theil fixture CSV here");
    synth->add_option("--year-lo", sy_year_lo, "Fixture start year (default 1995)");
    synth->add_option("--year-hi", sy_year_hi, "Fixture end year (default 2012)");

    // report
    auto* report = app.add_subcommand("report", "Re-render files from a saved report");
    std::string r_report, r_outdir;
    report->add_option("--report", r_report, "report.json path")->required();
    report->add_option("--outdir", r_outdir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return cmd_run(run_config, run_outdir);
        if (*ingest) return cmd_ingest_check(ic_panel, ic_metadata, ic_min_coverage, ic_keep_all);
        if (*tails) return cmd_tails(t_panel, t_code, t_side, t_min_tail, t_period);
        if (*scaling) return cmd_scaling(s_panel, s_code, s_vr_lag, s_dfa_windows, s_period);
        if (*similarity)
            return cmd_similarity(sim_panel, sim_bins, sim_binning, sim_out, sim_period);
        if (*cluster)
            return cmd_cluster(c_panel, c_linkage, c_bins, c_threshold, c_newick, c_period);
        if (*macro)
            return cmd_macro(m_gdp, m_exports, m_theil, m_year_lo, m_year_hi, m_slots, m_mode);
        if (*synth)
            return cmd_synth(sy_spec, sy_out, sy_metadata, sy_gdp, sy_theil, sy_year_lo,
                             sy_year_hi);
        if (*report) return cmd_report(r_report, r_outdir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
