#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "fxtails/clustering.hpp"
#include "fxtails/errors.hpp"
#include "fxtails/panel.hpp"
#include "fxtails/pipeline.hpp"
#include "fxtails/synth.hpp"
#include "helpers.hpp"

using namespace fxtails;
using nlohmann::json;

namespace {

PricePanel two_walk_panel(std::size_t days) {
    SeriesSpec a;
    a.code = "AAA";
    a.meta.code = "AAA";
    a.spec = {GaussianRandomWalk{}, days, 7};
    SeriesSpec b = a;
    b.code = "BBB";
    b.meta.code = "BBB";
    b.spec.seed = 8;
    return gen_synthetic_panel({a, b});
}

PricePanel ten_day_panel() {
    std::vector<CurrencyMeta> metas(1);
    metas[0].code = "AAA";
    std::vector<Date> dates;
    std::vector<double> row;
    for (int d = 0; d < 10; ++d) {
        dates.push_back(Date{2000, 1, 1}.plus_days(d));
        row.push_back(100.0 + d);
    }
    return PricePanel::create(std::move(metas), std::move(dates), {row});
}

std::vector<double> to_vec(std::span<const double> s) {
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("split_periods produces equal contiguous slices") {
    const PricePanel panel = two_walk_panel(6033);
    std::vector<std::string> log;
    const auto parts = split_periods(panel, 3, &log);

    REQUIRE(parts.size() == 3);
    CHECK(log.empty());
    for (const PricePanel& part : parts) {
        CHECK(part.day_count() == 2011);
        CHECK(part.currency_count() == 2);
        CHECK(part.meta(0).code == "AAA");
        CHECK(part.meta(1).code == "BBB");
    }
    CHECK(parts[1].dates().front() == panel.dates()[2011]);
    CHECK(parts[2].dates().back() == panel.dates().back());

    // Concatenating the slices reproduces the panel exactly.
    std::vector<Date> dates_cat;
    std::vector<double> row0_cat, row1_cat;
    for (const PricePanel& part : parts) {
        const auto& d = part.dates();
        dates_cat.insert(dates_cat.end(), d.begin(), d.end());
        const auto v0 = to_vec(part.row(0));
        const auto v1 = to_vec(part.row(1));
        row0_cat.insert(row0_cat.end(), v0.begin(), v0.end());
        row1_cat.insert(row1_cat.end(), v1.begin(), v1.end());
    }
    CHECK(dates_cat == panel.dates());
    CHECK(row0_cat == to_vec(panel.row(0)));
    CHECK(row1_cat == to_vec(panel.row(1)));
}

TEST_CASE("split_periods remainder days extend the final slice") {
    const PricePanel panel = ten_day_panel();
    std::vector<std::string> log;
    const auto parts = split_periods(panel, 3, &log);

    REQUIRE(parts.size() == 3);
    CHECK(parts[0].day_count() == 3);
    CHECK(parts[1].day_count() == 3);
    CHECK(parts[2].day_count() == 4);
    REQUIRE(log.size() == 1);
    CHECK(log[0] == "split_periods: 1 remainder day(s) extend the final period");
    const std::vector<double> tail_vals{106.0, 107.0, 108.0, 109.0};
    CHECK(to_vec(parts[2].row(0)) == tail_vals);
}

TEST_CASE("split_periods with k = 1 returns the panel unchanged") {
    const PricePanel panel = ten_day_panel();
    const auto parts = split_periods(panel, 1);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0] == panel);
}

TEST_CASE("split_periods rejects bad k") {
    const PricePanel panel = ten_day_panel();
    CHECK_THROWS_AS(split_periods(panel, 0), ConfigError);
    CHECK_THROWS_WITH_AS(split_periods(panel, 11),
                         doctest::Contains("exceeds day count"), LengthError);
}

TEST_CASE("load_config fills defaults for absent keys") {
    const auto path = test::write_file("cfg_min.json", R"({"panel": "prices.csv"})");
    const AnalysisConfig cfg = load_config(path);

    AnalysisConfig expect;
    expect.panel_path = "prices.csv";
    CHECK(cfg == expect);
}

TEST_CASE("load_config reads every key") {
    const auto path = test::write_file("cfg_full.json", R"({
        "panel": "p.csv", "metadata": "m.csv", "gdp": "g.csv",
        "exports": "e.csv", "theil": "t.csv", "outdir": "results",
        "period_count": 4, "bins": 512, "vr_lag": 5, "dfa_windows": 8,
        "linkage": "average", "min_tail": 30, "year_lo": 1999,
        "year_hi": 2005, "seed": 42, "min_coverage": 0.5,
        "theil_slots": 16, "theil_mode": "nonzero_products",
        "binning": "global"
    })");
    const AnalysisConfig cfg = load_config(path);

    CHECK(cfg.panel_path == "p.csv");
    CHECK(cfg.metadata_path == "m.csv");
    CHECK(cfg.gdp_path == "g.csv");
    CHECK(cfg.exports_path == "e.csv");
    CHECK(cfg.theil_path == "t.csv");
    CHECK(cfg.outdir == "results");
    CHECK(cfg.period_count == 4);
    CHECK(cfg.bins == 512);
    CHECK(cfg.vr_lag == 5);
    CHECK(cfg.dfa_window_count == 8);
    CHECK(cfg.linkage == Linkage::average);
    CHECK(cfg.min_tail == 30);
    CHECK(cfg.year_lo == 1999);
    CHECK(cfg.year_hi == 2005);
    CHECK(cfg.seed == 42);
    CHECK(cfg.min_coverage == 0.5);
    CHECK(cfg.theil_slots == 16);
    CHECK(cfg.theil_mode == TheilMode::nonzero_products);
    CHECK(cfg.binning == BinningMode::global);
}

TEST_CASE("load_config rejects malformed files") {
    CHECK_THROWS_WITH_AS(load_config("/nonexistent/fx-tails-config.json"),
                         doctest::Contains("cannot read"), ConfigError);

    auto bad = [](const std::string& name, const std::string& body) {
        return test::write_file(name, body);
    };
    CHECK_THROWS_AS(load_config(bad("cfg_syntax.json", "{\"panel\"")), ConfigError);
    CHECK_THROWS_WITH_AS(load_config(bad("cfg_array.json", "[1, 2]")),
                         doctest::Contains("not a JSON object"), ConfigError);
    CHECK_THROWS_WITH_AS(load_config(bad("cfg_nopanel.json", "{}")),
                         doctest::Contains("'panel' is required"), ConfigError);
    CHECK_THROWS_WITH_AS(
        load_config(bad("cfg_unknown.json", R"({"panel": "p", "pannel": "x"})")),
        doctest::Contains("unknown key 'pannel'"), ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_type.json", R"({"panel": 3})")), ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_bins_type.json",
                                    R"({"panel": "p", "bins": "many"})")),
                    ConfigError);
    CHECK_THROWS_WITH_AS(
        load_config(bad("cfg_mode.json", R"({"panel": "p", "theil_mode": "tuple"})")),
        doctest::Contains("unknown theil_mode"), ConfigError);
    CHECK_THROWS_WITH_AS(
        load_config(bad("cfg_binning.json", R"({"panel": "p", "binning": "adaptive"})")),
        doctest::Contains("unknown binning"), ConfigError);
    CHECK_THROWS_WITH_AS(
        load_config(bad("cfg_linkage.json", R"({"panel": "p", "linkage": "ward"})")),
        doctest::Contains("unknown linkage"), ConfigError);
}

TEST_CASE("load_config rejects out-of-range values") {
    auto bad = [](const std::string& name, const std::string& body) {
        return test::write_file(name, "{\"panel\": \"p\", " + body + "}");
    };
    CHECK_THROWS_AS(load_config(bad("cfg_pc.json", R"("period_count": 0)")), ConfigError);
    CHECK_THROWS_WITH_AS(load_config(bad("cfg_bins.json", R"("bins": 1)")),
                         doctest::Contains("bins must be >= 2"), ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_vr.json", R"("vr_lag": 1)")), ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_dfa.json", R"("dfa_windows": 3)")), ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_tail.json", R"("min_tail": 1)")), ConfigError);
    CHECK_THROWS_WITH_AS(
        load_config(bad("cfg_years.json", R"("year_lo": 2005, "year_hi": 1999)")),
        doctest::Contains("year_lo must not exceed year_hi"), ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_cov_hi.json", R"("min_coverage": 1.5)")),
                    ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_cov_lo.json", R"("min_coverage": -0.25)")),
                    ConfigError);
    CHECK_THROWS_AS(load_config(bad("cfg_slots.json", R"("theil_slots": 0)")), ConfigError);
}

TEST_CASE("run_analysis validates the config and input paths") {
    AnalysisConfig cfg;
    CHECK_THROWS_AS(run_analysis(cfg), ConfigError);  // no panel

    cfg.panel_path = "somewhere.csv";
    cfg.vr_lag = 1;
    CHECK_THROWS_AS(run_analysis(cfg), ConfigError);

    cfg.vr_lag = 10;
    cfg.panel_path = "/nonexistent/fx-tails-panel.csv";
    CHECK_THROWS_AS(run_analysis(cfg), IoError);
}

TEST_CASE("report JSON parsing rejects garbage") {
    CHECK_THROWS_AS(report_from_json("{"), ParseError);
    CHECK_THROWS_AS(report_from_json(R"({"version": 3})"), ParseError);
    CHECK_THROWS_AS(load_report("/nonexistent/fx-tails-report.json"), IoError);
}

// ---------------------------------------------------------------------------
// End-to-end run on a six-currency synthetic panel
// ---------------------------------------------------------------------------

namespace {

SeriesSpec mini_series(const std::string& code, Generator gen, std::uint64_t seed,
                       MarketClass cls, Regime regime, const std::string& region,
                       double g, double theil) {
    SeriesSpec s;
    s.code = code;
    s.spec = {gen, 900, seed};
    s.meta.code = code;
    s.meta.market_class = cls;
    s.meta.regime = regime;
    s.meta.region = region;
    s.g_proxy = g;
    s.theil_proxy = theil;
    s.start_date = Date{1995, 10, 23};
    return s;
}

// Two currencies per market class; theil proxies are dyadic so the annual
// means recover them exactly.
std::vector<SeriesSpec> mini_specs() {
    return {
        mini_series("DVA", GaussianRandomWalk{}, 11, MarketClass::developed,
                    Regime::floating, "Europe", 40000.0, 1.0),
        mini_series("DVB", GaussianRandomWalk{}, 12, MarketClass::developed,
                    Regime::floating, "Europe", 35000.0, 1.25),
        mini_series("EMA", StudentTReturns{5.0}, 13, MarketClass::emerging,
                    Regime::floating, "Asia", 8000.0, 2.25),
        mini_series("EMB", StudentTReturns{5.0}, 14, MarketClass::emerging,
                    Regime::floating, "America", 6000.0, 2.5),
        mini_series("FRA", StudentTReturns{2.5}, 15, MarketClass::frontier,
                    Regime::crawling_peg, "Africa", 900.0, 3.5),
        mini_series("FRB", StudentTReturns{2.5}, 16, MarketClass::frontier,
                    Regime::fixed_peg, "Asia", 700.0, 3.0),
    };
}

struct MiniFixture {
    std::filesystem::path dir;
    AnalysisConfig cfg;
};

MiniFixture write_mini_fixture() {
    MiniFixture fx;
    fx.dir = test::temp_path("mini-panel");
    std::filesystem::create_directories(fx.dir);

    const auto specs = mini_specs();
    const PricePanel panel = gen_synthetic_panel(specs);
    save_price_panel(panel, (fx.dir / "panel.csv").string());
    write_metadata_fixture(specs, (fx.dir / "metadata.csv").string());
    write_macro_fixture(specs, (fx.dir / "gdp.csv").string(),
                        (fx.dir / "theil.csv").string(), 1995, 1998);

    fx.cfg.panel_path = (fx.dir / "panel.csv").string();
    fx.cfg.metadata_path = (fx.dir / "metadata.csv").string();
    fx.cfg.gdp_path = (fx.dir / "gdp.csv").string();
    fx.cfg.theil_path = (fx.dir / "theil.csv").string();
    fx.cfg.outdir = (fx.dir / "out").string();
    fx.cfg.period_count = 3;
    fx.cfg.bins = 200;
    fx.cfg.year_lo = 1995;
    fx.cfg.year_hi = 1998;
    return fx;
}

std::size_t count_lines(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::size_t count_entries(const std::filesystem::path& dir) {
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++n;
    return n;
}

}  // namespace

TEST_CASE("run_analysis end to end on a six-currency synthetic panel") {
    const MiniFixture fx = write_mini_fixture();
    const Report report = run_analysis(fx.cfg);

    CHECK(report.version == kToolVersion);
    CHECK(!report.generated_at.empty());
    CHECK(report.config == fx.cfg);
    CHECK(report.panel_exclusions.empty());
    CHECK(report.warnings.empty());  // 900 / 3 splits evenly

    const SpanReport& full = report.full;
    CHECK(full.name == "full");
    CHECK(full.day_count == 900);
    const Date start{1995, 10, 23};
    CHECK(full.start == start);
    CHECK(full.end == start.plus_days(899));

    REQUIRE(report.periods.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(report.periods[i].name == "period" + std::to_string(i + 1));
        CHECK(report.periods[i].day_count == 300);
    }
    CHECK(report.periods[0].start == full.start);
    CHECK(report.periods[2].end == full.end);
    CHECK(report.periods[1].start == report.periods[0].end.plus_days(1));

    // Per-currency records, sorted by code.
    REQUIRE(full.currencies.size() == 6);
    const std::vector<std::string> want_codes{"DVA", "DVB", "EMA", "EMB", "FRA", "FRB"};
    for (std::size_t i = 0; i < 6; ++i) CHECK(full.currencies[i].code == want_codes[i]);

    for (const CurrencyResult& rec : full.currencies) {
        CHECK(rec.n_returns == 899);
        CHECK(rec.has_moments);
        CHECK(rec.has_dfa);
        CHECK(rec.has_vr);
        CHECK(rec.tail_pos.ok);
        CHECK(rec.tail_neg.ok);
        CHECK(rec.has_g);
        CHECK(rec.has_theil);
        CHECK(!rec.ccdf_pos.empty());
        CHECK(!rec.ccdf_neg.empty());
        CHECK(rec.warnings.empty());
        CHECK(std::abs(rec.moments.mean) < 0.2);
        CHECK(rec.moments.std > 0.5);
        CHECK(rec.moments.std < 2.0);
        CHECK(rec.moments.kurtosis > 1.0);
    }

    // Metadata survived the trip through the CSV fixtures.
    CHECK(full.currencies[0].market_class == MarketClass::developed);
    CHECK(full.currencies[4].market_class == MarketClass::frontier);
    CHECK(full.currencies[4].regime == Regime::crawling_peg);
    CHECK(full.currencies[5].regime == Regime::fixed_peg);
    CHECK(full.currencies[2].region == "Asia");

    // Constant annual fixtures mean the span averages equal the proxies.
    const std::vector<double> want_g{40000.0, 35000.0, 8000.0, 6000.0, 900.0, 700.0};
    const std::vector<double> want_theil{1.0, 1.25, 2.25, 2.5, 3.5, 3.0};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(full.currencies[i].g_mean == want_g[i]);
        CHECK(full.currencies[i].theil_mean == want_theil[i]);
    }

    // Heavy-tailed classes carry more kurtosis than the random walks.
    const double kurt_dev = std::max(full.currencies[0].moments.kurtosis,
                                     full.currencies[1].moments.kurtosis);
    const double kurt_fr = std::min(full.currencies[4].moments.kurtosis,
                                    full.currencies[5].moments.kurtosis);
    CHECK(kurt_fr > kurt_dev);

    CHECK(full.cross.has_gamma_pos);
    CHECK(full.cross.has_gamma_neg);
    CHECK(full.cross.gamma_pos.count == 6);
    REQUIRE(full.cross.skewness_by_class.size() == 3);
    for (const GroupSkewRow& row : full.cross.skewness_by_class) CHECK(row.count == 2);

    CHECK(full.macro.n_matched == 6);
    CHECK(full.macro.has_g_corr);
    CHECK(full.macro.g_corr.n == 6);
    CHECK(full.macro.g_corr.rho < 0.0);
    CHECK(full.macro.has_theil_corr);
    CHECK(full.macro.theil_corr.rho > 0.0);
    CHECK(full.macro.has_regression);
    CHECK(full.macro.regression.n == 6);

    CHECK(full.clusters.has);
    CHECK(full.clusters.linkage == "complete");
    CHECK(full.clusters.distance.codes.size() == 6);
    CHECK(full.clusters.distance.excluded.empty());
    CHECK(full.clusters.dendrogram.leaves.size() == 6);
    CHECK(full.clusters.dendrogram.merges.size() == 5);
    CHECK(full.clusters.cut.labels.size() == 6);

    // Six currencies over 900 days is nowhere near the reference shape.
    CHECK(full.benchmarks.empty());
    for (const SpanReport& p : report.periods) {
        CHECK(p.benchmarks.empty());
        CHECK(p.currencies.size() == 6);
        for (const CurrencyResult& rec : p.currencies) {
            CHECK(rec.n_returns == 299);
            CHECK(rec.has_moments);
            CHECK(rec.has_dfa);
            CHECK(rec.has_vr);
        }
        CHECK(p.clusters.has);
    }

    // JSON round trip is byte-stable.
    const std::string j1 = report_to_json(report);
    CHECK(j1.back() == '\n');
    const Report back = report_from_json(j1);
    CHECK(report_to_json(back) == j1);
    CHECK(back.config == fx.cfg);

    const auto saved = (fx.dir / "saved.json").string();
    save_report(report, saved);
    CHECK(test::slurp(saved) == j1);
    CHECK(report_to_json(load_report(saved)) == j1);

    // A second run differs at most in its timestamp.
    const Report again = run_analysis(fx.cfg);
    json ja = json::parse(j1);
    json jb = json::parse(report_to_json(again));
    ja["generated_at"] = "";
    jb["generated_at"] = "";
    CHECK(ja == jb);

    // The full span does not depend on how the periods are cut.
    AnalysisConfig cfg1 = fx.cfg;
    cfg1.period_count = 1;
    const Report whole = run_analysis(cfg1);
    REQUIRE(whole.periods.size() == 1);
    json jc = json::parse(report_to_json(whole));
    CHECK(jc["full"] == ja["full"]);
    json p1 = jc["periods"][0];
    p1["name"] = "full";
    CHECK(p1 == jc["full"]);
}

TEST_CASE("run_analysis without macro or metadata inputs") {
    const MiniFixture fx = write_mini_fixture();
    AnalysisConfig cfg = fx.cfg;
    cfg.metadata_path.clear();
    cfg.gdp_path.clear();
    cfg.theil_path.clear();
    cfg.period_count = 1;

    const Report report = run_analysis(cfg);
    CHECK(report.full.macro.n_matched == 0);
    CHECK(!report.full.macro.has_g_corr);
    CHECK(!report.full.macro.has_theil_corr);
    CHECK(!report.full.macro.has_regression);
    for (const CurrencyResult& rec : report.full.currencies) {
        CHECK(!rec.has_g);
        CHECK(!rec.has_theil);
        CHECK(rec.market_class == MarketClass::developed);  // metadata defaults
        CHECK(rec.regime == Regime::floating);
    }
    CHECK(report.full.clusters.has);
}

TEST_CASE("render_report writes the documented manifest") {
    const MiniFixture fx = write_mini_fixture();
    const Report report = run_analysis(fx.cfg);

    const std::filesystem::path out(fx.cfg.outdir);
    std::filesystem::remove_all(out);
    render_report(report, fx.cfg.outdir);

    CHECK(std::filesystem::exists(out / "report.json"));
    CHECK(test::slurp((out / "report.json").string()) == report_to_json(report));
    CHECK(count_entries(out) == 5);  // report.json + 4 span directories

    const std::vector<std::string> files{
        "per_currency.csv",    "ccdf.csv",         "dfa.csv",
        "scatter_gamma_alpha4.csv", "scatter_macro.csv", "distance_matrix.csv",
        "dendrogram.nwk",      "clusters.csv"};
    for (const std::string span : {"full", "period1", "period2", "period3"}) {
        CHECK(count_entries(out / span) == files.size());
        for (const std::string& f : files) CHECK(std::filesystem::exists(out / span / f));
    }

    const std::string pc = test::slurp((out / "full" / "per_currency.csv").string());
    CHECK(pc.substr(0, pc.find('\n')) ==
          "code,market_class,regime,region,n_returns,mean,std,skewness,"
          "kurtosis,gamma_pos,x_min_pos,n_tail_pos,ks_pos,stderr_pos,"
          "gamma_neg,x_min_neg,n_tail_neg,ks_neg,stderr_neg,"
          "dfa_exponent,dfa_r2,vr,g_mean,theil_mean");
    CHECK(count_lines(pc) == 7);
    CHECK(pc.find("\nDVA,developed,floating,Europe,899,") != std::string::npos);
    CHECK(pc.find("\nFRA,frontier,crawling_peg,Africa,899,") != std::string::npos);

    const std::string ccdf = test::slurp((out / "full" / "ccdf.csv").string());
    CHECK(ccdf.rfind("code,side,x,pc\nDVA,positive,", 0) == 0);

    std::size_t dfa_rows = 0;
    for (const CurrencyResult& rec : report.full.currencies)
        dfa_rows += rec.dfa_sizes.size();
    CHECK(count_lines(test::slurp((out / "full" / "dfa.csv").string())) == 1 + dfa_rows);

    CHECK(count_lines(test::slurp((out / "full" / "scatter_macro.csv").string())) == 7);
    CHECK(count_lines(test::slurp((out / "full" / "distance_matrix.csv").string())) == 7);

    const std::string clusters = test::slurp((out / "full" / "clusters.csv").string());
    CHECK(count_lines(clusters) == 7);
    CHECK(clusters.rfind("code,cluster_id\n", 0) == 0);

    CHECK(test::slurp((out / "full" / "dendrogram.nwk").string()) ==
          export_newick(report.full.clusters.dendrogram) + "\n");

    // Re-rendering overwrites in place with identical content.
    render_report(report, fx.cfg.outdir);
    CHECK(test::slurp((out / "full" / "per_currency.csv").string()) == pc);
    CHECK(count_entries(out) == 5);
}
