#include "fxtails/dates.hpp"

#include <charconv>
#include <cstdio>

namespace fxtails {

namespace {

bool is_leap(int y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

int days_in_month(int y, int m) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

}  // namespace

std::int64_t Date::serial() const {
    // Howard Hinnant's days_from_civil.
    std::int64_t y = year;
    const int m = month;
    const int d = day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date Date::from_serial(std::int64_t serial) {
    // Howard Hinnant's civil_from_days.
    serial += 719468;
    const std::int64_t era = (serial >= 0 ? serial : serial - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(serial - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

Date Date::plus_days(std::int64_t n) const {
    return from_serial(serial() + n);
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

Date Date::parse(const std::string& text) {
    const auto fail = [&] { throw ParseError("bad date '" + text + "', expected YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
    Date out;
    const char* p = text.data();
    auto num = [&](int off, int len, int& dst) {
        auto [ptr, ec] = std::from_chars(p + off, p + off + len, dst);
        if (ec != std::errc{} || ptr != p + off + len) fail();
    };
    num(0, 4, out.year);
    num(5, 2, out.month);
    num(8, 2, out.day);
    if (out.month < 1 || out.month > 12) fail();
    if (out.day < 1 || out.day > days_in_month(out.year, out.month)) fail();
    return out;
}

}  // namespace fxtails
