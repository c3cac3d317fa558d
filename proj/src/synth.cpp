#include "fxtails/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "fxtails/csv.hpp"
#include "fxtails/errors.hpp"
#include "fxtails/rng.hpp"

namespace fxtails {

namespace {

void validate(const SyntheticSpec& spec) {
    if (spec.length < 100) throw ConfigError("synthetic series length must be >= 100");
    if (const auto* ar = std::get_if<Ar1Profile>(&spec.generator)) {
        if (!(std::fabs(ar->phi) < 1.0)) throw ConfigError("ar1_profile: |phi| must be < 1");
    } else if (const auto* pl = std::get_if<ParetoReturns>(&spec.generator)) {
        if (!(pl->gamma > 1.0)) throw ConfigError("pareto_returns: gamma must be > 1");
        if (!(pl->x_min > 0.0)) throw ConfigError("pareto_returns: x_min must be > 0");
    } else if (const auto* st = std::get_if<StudentTReturns>(&spec.generator)) {
        if (!(st->nu > 0.0)) throw ConfigError("student_t_returns: nu must be > 0");
    }
}

}  // namespace

std::vector<double> gen_log_price_path(const SyntheticSpec& spec) {
    validate(spec);
    CounterRng rng(spec.seed);
    std::vector<double> path(spec.length);

    if (std::holds_alternative<GaussianRandomWalk>(spec.generator)) {
        double level = 0.0;
        path[0] = 0.0;
        for (std::size_t t = 1; t < spec.length; ++t) {
            level += rng.next_gaussian();
            path[t] = level;
        }
    } else if (const auto* ar = std::get_if<Ar1Profile>(&spec.generator)) {
        // Stationary start: y0 ~ N(0, 1/(1 - phi^2)), unit innovations.
        double y = rng.next_gaussian() / std::sqrt(1.0 - ar->phi * ar->phi);
        path[0] = y;
        for (std::size_t t = 1; t < spec.length; ++t) {
            y = ar->phi * y + rng.next_gaussian();
            path[t] = y;
        }
    } else if (const auto* pl = std::get_if<ParetoReturns>(&spec.generator)) {
        double level = 0.0;
        path[0] = 0.0;
        for (std::size_t t = 1; t < spec.length; ++t) {
            const double magnitude = rng.next_pareto(pl->gamma, pl->x_min);
            level += (t % 2 == 1) ? magnitude : -magnitude;
            path[t] = level;
        }
    } else {
        const auto& st = std::get<StudentTReturns>(spec.generator);
        double level = 0.0;
        path[0] = 0.0;
        for (std::size_t t = 1; t < spec.length; ++t) {
            level += rng.next_student_t(st.nu);
            path[t] = level;
        }
    }

    // Center so that exp(path) stays within double range even for
    // heavy-tailed walks. A common shift leaves every log return unchanged.
    const auto [lo, hi] = std::minmax_element(path.begin(), path.end());
    const double shift = 0.5 * (*lo + *hi);
    for (double& v : path) v -= shift;
    return path;
}

PricePanel gen_synthetic_panel(const std::vector<SeriesSpec>& specs) {
    if (specs.empty()) throw ConfigError("gen_synthetic_panel: no series specs");
    std::size_t days = 0;
    Date start = specs.front().start_date;
    for (const auto& s : specs) {
        days = std::max(days, s.spec.length);
        if (s.start_date < start) start = s.start_date;
    }
    std::vector<Date> dates(days);
    for (std::size_t t = 0; t < days; ++t) dates[t] = start.plus_days(static_cast<std::int64_t>(t));

    std::vector<CurrencyMeta> metas;
    std::vector<std::vector<double>> prices;
    for (const auto& s : specs) {
        CurrencyMeta m = s.meta;
        m.code = s.code;
        metas.push_back(std::move(m));
        const auto path = gen_log_price_path(s.spec);
        const std::size_t offset =
            static_cast<std::size_t>(s.start_date.serial() - start.serial());
        std::vector<double> row(days, missing());
        for (std::size_t t = 0; t < path.size() && offset + t < days; ++t) {
            row[offset + t] = std::exp(path[t]);
        }
        prices.push_back(std::move(row));
    }
    return PricePanel::create(std::move(metas), std::move(dates), std::move(prices));
}

namespace {

struct KvBlock {
    std::size_t line = 0;
    std::unordered_map<std::string, std::string> kv;
};

std::string trimmed(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<KvBlock> parse_blocks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<KvBlock> blocks;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trimmed(line);
        if (t.empty()) continue;
        if (t == "[series]") {
            blocks.push_back(KvBlock{line_number, {}});
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path + ":" + std::to_string(line_number) +
                             ": expected 'key = value' or '[series]'");
        }
        if (blocks.empty()) {
            throw ParseError(path + ":" + std::to_string(line_number) +
                             ": key before any [series] block");
        }
        const std::string key = trimmed(t.substr(0, eq));
        const std::string value = trimmed(t.substr(eq + 1));
        if (!blocks.back().kv.emplace(key, value).second) {
            throw ParseError(path + ":" + std::to_string(line_number) + ": duplicate key '" +
                             key + "'");
        }
    }
    return blocks;
}

double to_double(const std::string& path, const KvBlock& b, const std::string& key) {
    try {
        return std::stod(b.kv.at(key));
    } catch (const std::exception&) {
        throw ParseError(path + ": block at line " + std::to_string(b.line) + ": bad number for '" +
                         key + "'");
    }
}

}  // namespace

std::vector<SeriesSpec> load_series_specs(const std::string& path) {
    const auto blocks = parse_blocks(path);
    if (blocks.empty()) throw ParseError(path + ": no [series] blocks");
    std::vector<SeriesSpec> specs;
    std::unordered_set<std::string> codes;
    std::size_t auto_id = 0;
    for (const auto& b : blocks) {
        SeriesSpec s;
        const auto get = [&](const char* key) -> const std::string* {
            const auto it = b.kv.find(key);
            return it == b.kv.end() ? nullptr : &it->second;
        };
        if (const auto* v = get("code")) {
            s.code = *v;
        } else {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "S%02zu", ++auto_id);
            s.code = buf;
        }
        if (!codes.insert(s.code).second) {
            throw ParseError(path + ": duplicate series code '" + s.code + "'");
        }
        const auto* gen = get("generator");
        if (!gen) {
            throw ParseError(path + ": block at line " + std::to_string(b.line) +
                             ": missing 'generator'");
        }
        if (*gen == "gaussian_random_walk") {
            s.spec.generator = GaussianRandomWalk{};
        } else if (*gen == "ar1_profile") {
            s.spec.generator = Ar1Profile{to_double(path, b, "phi")};
        } else if (*gen == "pareto_returns") {
            s.spec.generator = ParetoReturns{to_double(path, b, "gamma"),
                                             get("x_min") ? to_double(path, b, "x_min") : 1.0};
        } else if (*gen == "student_t_returns") {
            s.spec.generator = StudentTReturns{to_double(path, b, "nu")};
        } else {
            throw ParseError(path + ": block at line " + std::to_string(b.line) +
                             ": unknown generator '" + *gen + "'");
        }
        if (get("length")) s.spec.length = static_cast<std::size_t>(to_double(path, b, "length"));
        if (get("seed")) s.spec.seed = static_cast<std::uint64_t>(to_double(path, b, "seed"));
        if (const auto* v = get("class")) s.meta.market_class = parse_market_class(*v);
        if (const auto* v = get("regime")) s.meta.regime = parse_regime(*v);
        if (const auto* v = get("region")) s.meta.region = *v;
        if (get("g")) s.g_proxy = to_double(path, b, "g");
        if (get("theil")) s.theil_proxy = to_double(path, b, "theil");
        if (const auto* v = get("start_date")) s.start_date = Date::parse(*v);
        s.meta.code = s.code;
        specs.push_back(std::move(s));
    }
    return specs;
}

void write_macro_fixture(const std::vector<SeriesSpec>& specs, const std::string& gdp_path,
                         const std::string& theil_path, int year_from, int year_to) {
    std::ofstream gdp(gdp_path);
    if (!gdp) throw IoError("cannot write '" + gdp_path + "'");
    std::ofstream theil(theil_path);
    if (!theil) throw IoError("cannot write '" + theil_path + "'");
    gdp << "code,year,gdp_per_capita\n";
    theil << "code,year,theil\n";
    for (const auto& s : specs) {
        for (int y = year_from; y <= year_to; ++y) {
            if (s.g_proxy > 0.0) {
                gdp << s.code << ',' << y << ',' << format_double(s.g_proxy) << '\n';
            }
            if (s.theil_proxy > 0.0) {
                theil << s.code << ',' << y << ',' << format_double(s.theil_proxy) << '\n';
            }
        }
    }
}

void write_metadata_fixture(const std::vector<SeriesSpec>& specs, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "code,regime,market_class,region\n";
    for (const auto& s : specs) {
        out << s.code << ',' << to_string(s.meta.regime) << ',' << to_string(s.meta.market_class)
            << ',' << s.meta.region << '\n';
    }
}

}  // namespace fxtails
