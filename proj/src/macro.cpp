#include "fxtails/macro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fxtails/csv.hpp"
#include "fxtails/errors.hpp"
#include "fxtails/stats.hpp"

namespace fxtails {

double theil_index(std::span<const double> exports, std::size_t slots) {
    if (slots < 1) throw ConfigError("theil_index: slots must be >= 1");
    if (exports.size() > slots)
        throw ValidationError("theil_index: more products than slots");
    double total = 0.0;
    for (std::size_t i = 0; i < exports.size(); ++i) {
        if (exports[i] < 0.0)
            throw ValidationError("theil_index: negative export value at index " +
                                  std::to_string(i));
        total += exports[i];
    }
    if (total <= 0.0) throw DegenerateError("theil_index: all exports are zero");
    const double xbar = total / static_cast<double>(slots);
    double sum = 0.0;
    for (double x : exports) {
        if (x == 0.0) continue;  // 0 ln 0 = 0
        const double ratio = x / xbar;
        sum += ratio * std::log(ratio);
    }
    return sum / static_cast<double>(slots);
}

double mean_indicator(const std::map<int, double>& annual, int year_lo,
                      int year_hi, std::vector<int>* missing) {
    if (year_lo > year_hi) throw ConfigError("mean_indicator: empty year range");
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = year_lo; y <= year_hi; ++y) {
        auto it = annual.find(y);
        if (it == annual.end()) {
            if (missing) missing->push_back(y);
            continue;
        }
        sum += it->second;
        ++count;
    }
    if (count == 0)
        throw SparsityError("mean_indicator: no data in " + std::to_string(year_lo) +
                            "-" + std::to_string(year_hi));
    return sum / static_cast<double>(count);
}

namespace {

std::vector<double> log_all_positive(std::span<const double> xs, const char* what) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0))
            throw DomainError(std::string(what) + ": non-positive value at index " +
                              std::to_string(i));
        out[i] = std::log(xs[i]);
    }
    return out;
}

}  // namespace

CorrelationResult log_pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthError("log_pearson: length mismatch");
    if (x.size() < 3) throw LengthError("log_pearson: need n >= 3");
    const std::vector<double> lx = log_all_positive(x, "log_pearson x");
    const std::vector<double> ly = log_all_positive(y, "log_pearson y");
    CorrelationResult out;
    out.n = x.size();
    out.rho = pearson(lx, ly);
    const auto df = static_cast<double>(out.n - 2);
    const double denom = 1.0 - out.rho * out.rho;
    if (denom <= 0.0) {
        out.p = std::numeric_limits<double>::min();
        return out;
    }
    const double t = out.rho * std::sqrt(df / denom);
    out.p = t_test_p_two_sided(t, df);
    return out;
}

PowerFit loglog_power_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw LengthError("loglog_power_fit: length mismatch");
    if (x.size() < 3) throw LengthError("loglog_power_fit: need n >= 3");
    const std::vector<double> lx = log_all_positive(x, "loglog_power_fit x");
    const std::vector<double> ly = log_all_positive(y, "loglog_power_fit y");
    const LineFit line = fit_line(lx, ly);
    PowerFit out;
    out.exponent = line.slope;
    out.prefactor = std::exp(line.intercept);
    out.r2 = line.r2;
    return out;
}

RegressionFit multilinear_fit(std::span<const double> alpha4,
                              std::span<const double> g,
                              std::span<const double> theil) {
    const std::size_t n = alpha4.size();
    if (g.size() != n || theil.size() != n)
        throw LengthError("multilinear_fit: length mismatch");
    if (n < 4) throw LengthError("multilinear_fit: need n >= 4");
    const std::vector<double> ly = log_all_positive(alpha4, "multilinear_fit alpha4");
    const std::vector<double> x1 = log_all_positive(g, "multilinear_fit g");
    const std::vector<double> x2 = log_all_positive(theil, "multilinear_fit theil");

    // Normal equations (X'X) b = X'y for X = [1, x1, x2].
    double a[3][3] = {};
    double rhs[3] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double row[3] = {1.0, x1[i], x2[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) a[r][c] += row[r] * row[c];
            rhs[r] += row[r] * ly[i];
        }
    }

    // Gaussian elimination with partial pivoting; a vanishing pivot relative
    // to the matrix scale means collinear predictors.
    double scale = 0.0;
    for (auto& r : a)
        for (double v : r) scale = std::max(scale, std::abs(v));
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[perm[r]][col]) > std::abs(a[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        const double pivot = a[perm[col]][col];
        if (std::abs(pivot) <= 1e-12 * scale)
            throw DegenerateError("multilinear_fit: singular design (collinear predictors)");
        for (int r = col + 1; r < 3; ++r) {
            const double factor = a[perm[r]][col] / pivot;
            for (int c = col; c < 3; ++c) a[perm[r]][c] -= factor * a[perm[col]][c];
            rhs[perm[r]] -= factor * rhs[perm[col]];
        }
    }
    double b[3];
    for (int col = 2; col >= 0; --col) {
        double v = rhs[perm[col]];
        for (int c = col + 1; c < 3; ++c) v -= a[perm[col]][c] * b[c];
        b[col] = v / a[perm[col]][col];
    }

    RegressionFit fit;
    fit.b0 = b[0];
    fit.b1 = b[1];
    fit.b2 = b[2];
    fit.n = n;

    const double ybar = mean(ly);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = b[0] + b[1] * x1[i] + b[2] * x2[i];
        ss_res += (ly[i] - pred) * (ly[i] - pred);
        ss_tot += (ly[i] - ybar) * (ly[i] - ybar);
    }
    if (ss_tot <= 0.0)
        throw DegenerateError("multilinear_fit: response has zero variance");
    fit.r2 = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);

    const auto df2 = static_cast<double>(n - 3);
    if (fit.r2 >= 1.0) {
        fit.p = std::numeric_limits<double>::min();
    } else {
        const double f = (fit.r2 / 2.0) / ((1.0 - fit.r2) / df2);
        fit.p = f_test_p_upper(f, 2.0, df2);
    }
    return fit;
}

namespace {

void check_header(const CsvRow& row, std::initializer_list<const char*> want,
                  const std::string& path) {
    bool ok = row.cells.size() == want.size();
    if (ok) {
        std::size_t i = 0;
        for (const char* name : want)
            if (row.cells[i++] != name) ok = false;
    }
    if (!ok) {
        std::string expect;
        for (const char* name : want) {
            if (!expect.empty()) expect += ',';
            expect += name;
        }
        throw ParseError(path + ": expected header '" + expect + "'");
    }
}

int parse_year(const std::string& cell, std::size_t line) {
    const double v = parse_double_cell(cell, line, 2);
    const int year = static_cast<int>(v);
    if (static_cast<double>(year) != v || year < 1000 || year > 9999)
        throw ParseError("line " + std::to_string(line) + ": bad year '" + cell + "'");
    return year;
}

}  // namespace

void load_gdp_csv(const std::string& path, MacroTable& table) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw ParseError(path + ": empty file");
    check_header(rows[0], {"code", "year", "gdp_per_capita"}, path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CsvRow& row = rows[i];
        if (row.cells.size() != 3)
            throw ParseError(path + ":" + std::to_string(row.line_number) +
                             ": expected 3 cells");
        const int year = parse_year(row.cells[1], row.line_number);
        const double value = parse_double_cell(row.cells[2], row.line_number, 3);
        if (value < 0.0)
            throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                  ": negative GDP per capita");
        MacroRecord& rec = table.records[row.cells[0]];
        rec.code = row.cells[0];
        rec.g_annual[year] = value;
    }
}

void load_exports_csv(const std::string& path, MacroTable& table) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw ParseError(path + ": empty file");
    check_header(rows[0], {"code", "year", "product_id", "value_usd"}, path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CsvRow& row = rows[i];
        if (row.cells.size() != 4)
            throw ParseError(path + ":" + std::to_string(row.line_number) +
                             ": expected 4 cells");
        const int year = parse_year(row.cells[1], row.line_number);
        const double value = parse_double_cell(row.cells[3], row.line_number, 4);
        if (value < 0.0)
            throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                  ": negative export value");
        MacroRecord& rec = table.records[row.cells[0]];
        rec.code = row.cells[0];
        rec.exports_annual[year].push_back(value);
    }
}

void load_theil_csv(const std::string& path, MacroTable& table) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw ParseError(path + ": empty file");
    check_header(rows[0], {"code", "year", "theil"}, path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const CsvRow& row = rows[i];
        if (row.cells.size() != 3)
            throw ParseError(path + ":" + std::to_string(row.line_number) +
                             ": expected 3 cells");
        const int year = parse_year(row.cells[1], row.line_number);
        const double value = parse_double_cell(row.cells[2], row.line_number, 3);
        if (value < 0.0)
            throw ValidationError(path + ":" + std::to_string(row.line_number) +
                                  ": negative Theil value");
        MacroRecord& rec = table.records[row.cells[0]];
        rec.code = row.cells[0];
        rec.theil_annual[year] = value;
    }
}

void compute_means(MacroTable& table, int year_lo, int year_hi,
                   std::size_t slots, TheilMode mode,
                   std::vector<std::string>& warnings) {
    for (auto& [code, rec] : table.records) {
        rec.has_g = false;
        rec.has_theil = false;
        try {
            rec.g_mean = mean_indicator(rec.g_annual, year_lo, year_hi);
            rec.has_g = true;
        } catch (const Error& e) {
            warnings.push_back(code + " gdp: " + e.what());
        }

        std::map<int, double> theil_by_year = rec.theil_annual;
        for (const auto& [year, exports] : rec.exports_annual) {
            if (theil_by_year.count(year)) continue;
            try {
                if (mode == TheilMode::fixed_slots) {
                    theil_by_year[year] = theil_index(exports, slots);
                } else {
                    std::vector<double> sold;
                    for (double x : exports)
                        if (x > 0.0) sold.push_back(x);
                    theil_by_year[year] = theil_index(sold, sold.size());
                }
            } catch (const Error& e) {
                warnings.push_back(code + " theil " + std::to_string(year) + ": " +
                                   e.what());
            }
        }
        try {
            rec.theil_mean = mean_indicator(theil_by_year, year_lo, year_hi);
            rec.has_theil = true;
        } catch (const Error& e) {
            warnings.push_back(code + " theil: " + e.what());
        }
    }
}

}  // namespace fxtails
