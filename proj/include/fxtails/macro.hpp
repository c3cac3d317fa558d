#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace fxtails {

// How many product slots enter the Theil mean: the full classification size
// (zero-export slots included) or only the products a country actually sells.
enum class TheilMode { fixed_slots, nonzero_products };

inline constexpr std::size_t kDefaultProductSlots = 777;

// T = (1/M) sum (x_i/xbar) ln(x_i/xbar) with xbar = (sum x_i)/M over all M
// slots; zero products contribute 0. Ranges over [0, ln M]. Throws
// DegenerateError when every export is zero, ValidationError on negative
// values or more products than slots.
double theil_index(std::span<const double> exports, std::size_t slots);

// Arithmetic mean of the yearly values inside [year_lo, year_hi]. Years absent
// from the map are skipped (appended to *missing when given), not imputed.
// Throws SparsityError when no year overlaps the range.
double mean_indicator(const std::map<int, double>& annual, int year_lo,
                      int year_hi, std::vector<int>* missing = nullptr);

struct CorrelationResult {
    double rho = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// Pearson correlation of (ln x, ln y) with a two-sided t-test p-value on
// n - 2 degrees of freedom. Inputs must be positive and non-degenerate.
CorrelationResult log_pearson(std::span<const double> x, std::span<const double> y);

struct PowerFit {
    double exponent = 0.0;
    double prefactor = 1.0;
    double r2 = 0.0;
};

// Least squares of ln y on ln x; models y = prefactor * x^exponent.
PowerFit loglog_power_fit(std::span<const double> x, std::span<const double> y);

struct RegressionFit {
    double b0 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double r2 = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// OLS of ln alpha4 on (1, ln g, ln theil) via the normal equations; p-value
// from the overall F-test with (2, n - 3) degrees of freedom. Collinear
// predictors raise DegenerateError.
RegressionFit multilinear_fit(std::span<const double> alpha4,
                              std::span<const double> g,
                              std::span<const double> theil);

struct MacroRecord {
    std::string code;
    std::map<int, double> g_annual;
    std::map<int, std::vector<double>> exports_annual;
    // Precomputed yearly Theil values; used in place of exports when present.
    std::map<int, double> theil_annual;
    double g_mean = 0.0;
    double theil_mean = 0.0;
    bool has_g = false;
    bool has_theil = false;
};

struct MacroTable {
    std::map<std::string, MacroRecord> records;
};

// CSV loaders; each row adds to the table. Headers are fixed:
//   gdp:     code,year,gdp_per_capita
//   exports: code,year,product_id,value_usd
//   theil:   code,year,theil
void load_gdp_csv(const std::string& path, MacroTable& table);
void load_exports_csv(const std::string& path, MacroTable& table);
void load_theil_csv(const std::string& path, MacroTable& table);

// Fills g_mean / theil_mean for every record from the yearly data over the
// inclusive year range. Records lacking data in range are reported in
// `warnings` and keep has_g / has_theil false.
void compute_means(MacroTable& table, int year_lo, int year_hi,
                   std::size_t slots, TheilMode mode,
                   std::vector<std::string>& warnings);

}  // namespace fxtails
