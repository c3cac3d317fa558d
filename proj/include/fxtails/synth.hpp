#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "fxtails/panel.hpp"

namespace fxtails {

// Price-path generators with known ground truth, used as oracles in tests and
// to build fixture panels. All draw from CounterRng so a (spec, seed) pair is
// reproducible bit-for-bit across platforms.

struct GaussianRandomWalk {};          // i.i.d. standard normal log returns
struct Ar1Profile {                    // stationary AR(1), used as the log-price profile
    double phi = 0.0;                  // |phi| < 1
};
struct ParetoReturns {                 // log returns of Pareto magnitude, alternating sign
    double gamma = 3.0;                // PDF exponent, > 1
    double x_min = 1.0;                // > 0
};
struct StudentTReturns {               // i.i.d. Student-t log returns
    double nu = 3.0;                   // degrees of freedom, > 0
};

using Generator = std::variant<GaussianRandomWalk, Ar1Profile, ParetoReturns, StudentTReturns>;

struct SyntheticSpec {
    Generator generator;
    std::size_t length = 100;          // number of days (prices); >= 100
    std::uint64_t seed = 0;
};

// One fixture series: a SyntheticSpec plus the metadata and macro proxies the
// pipeline fixtures need.
struct SeriesSpec {
    std::string code;
    SyntheticSpec spec;
    CurrencyMeta meta;                 // code copied from `code`
    double g_proxy = 0.0;              // synthetic mean GDP per capita (0 = absent)
    double theil_proxy = 0.0;          // synthetic mean Theil index (0 = absent)
    Date start_date{1995, 10, 23};
};

// Log-price path of `spec.length` entries, starting at 0 and centered so the
// exponentiated prices stay in double range. Throws ConfigError on bad
// parameters (gamma <= 1, |phi| >= 1, nu <= 0, x_min <= 0, length < 100).
std::vector<double> gen_log_price_path(const SyntheticSpec& spec);

// Panel over consecutive calendar days; deterministic given the seeds.
PricePanel gen_synthetic_panel(const std::vector<SeriesSpec>& specs);

// Spec file grammar: blocks introduced by "[series]", one "key = value" pair
// per line, '#' comments. Keys: code, generator, length, seed, phi, gamma,
// x_min, nu, class, regime, region, g, theil, start_date.
std::vector<SeriesSpec> load_series_specs(const std::string& path);

// Writes the macro fixture CSVs for a spec list: annual GDP per capita and
// annual Theil rows, constant over [year_from, year_to] so the configured
// means are recovered exactly. Series without proxies are skipped.
void write_macro_fixture(const std::vector<SeriesSpec>& specs, const std::string& gdp_path,
                         const std::string& theil_path, int year_from, int year_to);

void write_metadata_fixture(const std::vector<SeriesSpec>& specs, const std::string& path);

}  // namespace fxtails
