#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fxtails/dates.hpp"

namespace fxtails {

enum class Regime { floating, fixed_peg, crawling_peg, horizontal_band };
enum class MarketClass { developed, emerging, frontier };

std::string to_string(Regime r);
std::string to_string(MarketClass c);
Regime parse_regime(const std::string& s);
MarketClass parse_market_class(const std::string& s);

struct CurrencyMeta {
    std::string code;  // 3-letter ISO-style code, unique within a panel
    Regime regime = Regime::floating;
    MarketClass market_class = MarketClass::developed;
    std::string region;
};

// Missing observations are stored as NaN.
inline bool is_missing(double v) { return std::isnan(v); }
inline double missing() { return std::numeric_limits<double>::quiet_NaN(); }

// A half-open [start, stop) run of consecutive present observations.
struct Segment {
    std::size_t start = 0;
    std::size_t stop = 0;
    std::size_t length() const { return stop - start; }
};

// Aligned daily exchange-rate series for N currencies over T days. Immutable
// after construction; create() enforces the invariants:
//   - dates strictly increasing
//   - all present prices strictly positive
//   - every row has at least one run of >= 3 consecutive observations
//   - currency codes unique
class PricePanel {
public:
    static PricePanel create(std::vector<CurrencyMeta> currencies, std::vector<Date> dates,
                             std::vector<std::vector<double>> prices);

    std::size_t currency_count() const { return currencies_.size(); }
    std::size_t day_count() const { return dates_.size(); }

    const std::vector<CurrencyMeta>& currencies() const { return currencies_; }
    const CurrencyMeta& meta(std::size_t i) const { return currencies_[i]; }
    const std::vector<Date>& dates() const { return dates_; }
    std::span<const double> row(std::size_t i) const { return prices_[i]; }

    std::optional<std::size_t> index_of(const std::string& code) const;
    std::optional<std::size_t> date_index(const Date& d) const;

    // Fraction of non-missing cells in row i.
    double coverage(std::size_t i) const;

    // Sub-panel over day indices [start, stop). Metadata is shared.
    PricePanel slice_days(std::size_t start, std::size_t stop) const;

    // Panel restricted to the given currency rows, in the given order.
    PricePanel select_currencies(const std::vector<std::size_t>& rows) const;

    bool operator==(const PricePanel& other) const;

private:
    PricePanel() = default;
    std::vector<CurrencyMeta> currencies_;
    std::vector<Date> dates_;
    std::vector<std::vector<double>> prices_;  // [currency][day]
};

// Runs of consecutive present observations, in order.
std::vector<Segment> contiguous_segments(std::span<const double> series);

struct PanelLoadOptions {
    // Rows below this non-missing fraction are excluded (with a note in
    // `excluded`), as are rows that never reach 3 consecutive observations.
    double min_coverage = 0.8;
    bool apply_coverage_filter = true;
};

// Loads a panel CSV: header "date,<code>,<code>,...", one ISO date plus one
// decimal-or-empty cell per currency per row. Excluded currency codes, if any,
// are appended to `excluded` when it is non-null.
PricePanel load_price_panel(const std::string& path, const PanelLoadOptions& opts = {},
                            std::vector<std::string>* excluded = nullptr);

void save_price_panel(const PricePanel& panel, const std::string& path);

// Metadata CSV: header "code,regime,market_class,region". Returns records in
// file order; codes must be unique.
std::vector<CurrencyMeta> load_metadata(const std::string& path);

// Applies metadata records to a panel's currencies by code. Codes present in
// the panel but absent from `meta` keep their defaults and are reported.
PricePanel apply_metadata(const PricePanel& panel, const std::vector<CurrencyMeta>& meta,
                          std::vector<std::string>* unmatched = nullptr);

// Splices two aligned series (same date axis, gaps as NaN): the output equals
// `fallback` strictly before switch_index and `primary` from it onward.
// Throws ValidationError when the boundary is not covered: `primary` must be
// present at switch_index and `fallback` at switch_index - 1 (when it exists).
std::vector<double> splice_series(std::span<const double> primary,
                                  std::span<const double> fallback, std::size_t switch_index);

}  // namespace fxtails
