#include "fxtails/panel.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "fxtails/csv.hpp"
#include "fxtails/errors.hpp"

namespace fxtails {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::floating: return "floating";
        case Regime::fixed_peg: return "fixed_peg";
        case Regime::crawling_peg: return "crawling_peg";
        case Regime::horizontal_band: return "horizontal_band";
    }
    return "floating";
}

std::string to_string(MarketClass c) {
    switch (c) {
        case MarketClass::developed: return "developed";
        case MarketClass::emerging: return "emerging";
        case MarketClass::frontier: return "frontier";
    }
    return "developed";
}

Regime parse_regime(const std::string& s) {
    if (s == "floating") return Regime::floating;
    if (s == "fixed_peg") return Regime::fixed_peg;
    if (s == "crawling_peg") return Regime::crawling_peg;
    if (s == "horizontal_band") return Regime::horizontal_band;
    throw ParseError("unknown exchange-rate regime '" + s + "'");
}

MarketClass parse_market_class(const std::string& s) {
    if (s == "developed") return MarketClass::developed;
    if (s == "emerging") return MarketClass::emerging;
    if (s == "frontier") return MarketClass::frontier;
    throw ParseError("unknown market class '" + s + "'");
}

std::vector<Segment> contiguous_segments(std::span<const double> series) {
    std::vector<Segment> segments;
    std::size_t i = 0;
    while (i < series.size()) {
        if (is_missing(series[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < series.size() && !is_missing(series[j])) ++j;
        segments.push_back(Segment{i, j});
        i = j;
    }
    return segments;
}

namespace {

std::size_t longest_run(std::span<const double> series) {
    std::size_t best = 0;
    for (const Segment& s : contiguous_segments(series)) best = std::max(best, s.length());
    return best;
}

}  // namespace

PricePanel PricePanel::create(std::vector<CurrencyMeta> currencies, std::vector<Date> dates,
                              std::vector<std::vector<double>> prices) {
    if (currencies.size() != prices.size()) {
        throw ValidationError("panel: currency metadata and price rows disagree in count");
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : currencies) {
        if (!seen.insert(c.code).second) {
            throw ValidationError("panel: duplicate currency code '" + c.code + "'");
        }
    }
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (!(dates[t - 1] < dates[t])) {
            throw ValidationError("panel: dates not strictly increasing at " +
                                  dates[t].to_string());
        }
    }
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (prices[i].size() != dates.size()) {
            throw ValidationError("panel: row '" + currencies[i].code +
                                  "' length does not match date axis");
        }
        for (std::size_t t = 0; t < prices[i].size(); ++t) {
            const double v = prices[i][t];
            if (!is_missing(v) && !(v > 0.0)) {
                throw ValidationError("panel: non-positive price for '" + currencies[i].code +
                                      "' on " + dates[t].to_string());
            }
        }
        if (longest_run(prices[i]) < 3) {
            throw ValidationError("panel: currency '" + currencies[i].code +
                                  "' has no run of 3 consecutive observations");
        }
    }
    PricePanel p;
    p.currencies_ = std::move(currencies);
    p.dates_ = std::move(dates);
    p.prices_ = std::move(prices);
    return p;
}

std::optional<std::size_t> PricePanel::index_of(const std::string& code) const {
    for (std::size_t i = 0; i < currencies_.size(); ++i) {
        if (currencies_[i].code == code) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> PricePanel::date_index(const Date& d) const {
    const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || !(*it == d)) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

double PricePanel::coverage(std::size_t i) const {
    if (dates_.empty()) return 0.0;
    std::size_t present = 0;
    for (double v : prices_[i]) {
        if (!is_missing(v)) ++present;
    }
    return static_cast<double>(present) / static_cast<double>(dates_.size());
}

PricePanel PricePanel::slice_days(std::size_t start, std::size_t stop) const {
    if (start > stop || stop > dates_.size()) throw LengthError("panel slice out of range");
    PricePanel p;
    p.currencies_ = currencies_;
    p.dates_.assign(dates_.begin() + start, dates_.begin() + stop);
    p.prices_.reserve(prices_.size());
    for (const auto& row : prices_) {
        p.prices_.emplace_back(row.begin() + start, row.begin() + stop);
    }
    return p;
}

PricePanel PricePanel::select_currencies(const std::vector<std::size_t>& rows) const {
    PricePanel p;
    p.dates_ = dates_;
    for (std::size_t r : rows) {
        if (r >= currencies_.size()) throw LengthError("panel: currency index out of range");
        p.currencies_.push_back(currencies_[r]);
        p.prices_.push_back(prices_[r]);
    }
    return p;
}

bool PricePanel::operator==(const PricePanel& other) const {
    if (dates_ != other.dates_) return false;
    if (currencies_.size() != other.currencies_.size()) return false;
    for (std::size_t i = 0; i < currencies_.size(); ++i) {
        const auto& a = currencies_[i];
        const auto& b = other.currencies_[i];
        if (a.code != b.code || a.regime != b.regime || a.market_class != b.market_class ||
            a.region != b.region) {
            return false;
        }
        for (std::size_t t = 0; t < dates_.size(); ++t) {
            const double x = prices_[i][t];
            const double y = other.prices_[i][t];
            if (is_missing(x) != is_missing(y)) return false;
            if (!is_missing(x) && x != y) return false;
        }
    }
    return true;
}

PricePanel load_price_panel(const std::string& path, const PanelLoadOptions& opts,
                            std::vector<std::string>* excluded) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw ParseError(path + ": empty panel file");
    const auto& header = rows[0].cells;
    if (header.size() < 2 || header[0] != "date") {
        throw ParseError(path + ":" + std::to_string(rows[0].line_number) +
                         ": header must start with 'date' and name at least one currency");
    }
    const std::size_t n = header.size() - 1;
    std::vector<CurrencyMeta> currencies(n);
    for (std::size_t i = 0; i < n; ++i) currencies[i].code = header[i + 1];

    std::vector<Date> dates;
    std::vector<std::vector<double>> prices(n);
    dates.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != header.size()) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(row.cells.size()));
        }
        Date d;
        try {
            d = Date::parse(row.cells[0]);
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": " + e.what());
        }
        if (!dates.empty() && !(dates.back() < d)) {
            throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                  ": dates out of order at " + d.to_string());
        }
        dates.push_back(d);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = row.cells[i + 1];
            if (cell.empty()) {
                prices[i].push_back(missing());
                continue;
            }
            const double v = parse_double_cell(cell, row.line_number, i + 2);
            if (!(v > 0.0)) {
                throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                      ": non-positive price for '" + currencies[i].code +
                                      "' on " + d.to_string());
            }
            prices[i].push_back(v);
        }
    }

    if (opts.apply_coverage_filter) {
        const auto total = static_cast<double>(dates.size());
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t present = 0;
            for (double v : prices[i]) {
                if (!is_missing(v)) ++present;
            }
            const bool ok = total > 0 && static_cast<double>(present) / total >= opts.min_coverage &&
                            longest_run(prices[i]) >= 3;
            if (ok) {
                keep.push_back(i);
            } else if (excluded) {
                excluded->push_back(currencies[i].code);
            }
        }
        if (keep.empty()) throw ValidationError(path + ": no currency passes the coverage filter");
        std::vector<CurrencyMeta> kept_meta;
        std::vector<std::vector<double>> kept_prices;
        for (std::size_t i : keep) {
            kept_meta.push_back(std::move(currencies[i]));
            kept_prices.push_back(std::move(prices[i]));
        }
        currencies = std::move(kept_meta);
        prices = std::move(kept_prices);
    }

    return PricePanel::create(std::move(currencies), std::move(dates), std::move(prices));
}

void save_price_panel(const PricePanel& panel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "date";
    for (const auto& c : panel.currencies()) out << ',' << c.code;
    out << '\n';
    for (std::size_t t = 0; t < panel.day_count(); ++t) {
        out << panel.dates()[t].to_string();
        for (std::size_t i = 0; i < panel.currency_count(); ++i) {
            out << ',';
            const double v = panel.row(i)[t];
            if (!is_missing(v)) out << format_double(v);
        }
        out << '\n';
    }
    if (!out) throw IoError("write failure on '" + path + "'");
}

std::vector<CurrencyMeta> load_metadata(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw ParseError(path + ": empty metadata file");
    const std::vector<std::string> expect = {"code", "regime", "market_class", "region"};
    if (rows[0].cells != expect) {
        throw ParseError(path + ": header must be 'code,regime,market_class,region'");
    }
    std::vector<CurrencyMeta> out;
    std::unordered_set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.cells.size() != 4) {
            throw ParseError(path + ":" + std::to_string(row.line_number) +
                             ": expected 4 cells");
        }
        CurrencyMeta m;
        m.code = row.cells[0];
        try {
            m.regime = parse_regime(row.cells[1]);
            m.market_class = parse_market_class(row.cells[2]);
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(row.line_number) + ": " + e.what());
        }
        m.region = row.cells[3];
        if (!seen.insert(m.code).second) {
            throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                  ": duplicate code '" + m.code + "'");
        }
        out.push_back(std::move(m));
    }
    return out;
}

PricePanel apply_metadata(const PricePanel& panel, const std::vector<CurrencyMeta>& meta,
                          std::vector<std::string>* unmatched) {
    std::unordered_map<std::string, const CurrencyMeta*> by_code;
    for (const auto& m : meta) by_code[m.code] = &m;
    std::vector<CurrencyMeta> merged = panel.currencies();
    for (auto& c : merged) {
        const auto it = by_code.find(c.code);
        if (it == by_code.end()) {
            if (unmatched) unmatched->push_back(c.code);
            continue;
        }
        c = *it->second;
    }
    std::vector<std::vector<double>> prices;
    prices.reserve(panel.currency_count());
    for (std::size_t i = 0; i < panel.currency_count(); ++i) {
        const auto row = panel.row(i);
        prices.emplace_back(row.begin(), row.end());
    }
    return PricePanel::create(std::move(merged), panel.dates(), std::move(prices));
}

std::vector<double> splice_series(std::span<const double> primary,
                                  std::span<const double> fallback, std::size_t switch_index) {
    if (primary.size() != fallback.size()) {
        throw ValidationError("splice: series lengths differ");
    }
    if (switch_index > primary.size()) {
        throw ValidationError("splice: switch index beyond series end");
    }
    if (switch_index < primary.size() && is_missing(primary[switch_index])) {
        throw ValidationError("splice: primary series missing at the switch date");
    }
    if (switch_index > 0 && is_missing(fallback[switch_index - 1])) {
        throw ValidationError("splice: fallback series missing just before the switch date");
    }
    std::vector<double> out(primary.size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = t < switch_index ? fallback[t] : primary[t];
    }
    return out;
}

}  // namespace fxtails
