#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "fxtails/errors.hpp"

namespace fxtails {

// Calendar date. Stored as civil {year, month, day}; conversions to a serial
// day count use the standard proleptic-Gregorian algorithm so that date
// arithmetic is exact over the whole analysis range.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (negative before).
    std::int64_t serial() const;

    Date plus_days(std::int64_t n) const;

    // "YYYY-MM-DD"
    std::string to_string() const;

    // Parses strict ISO-8601 "YYYY-MM-DD"; throws ParseError otherwise.
    static Date parse(const std::string& text);

    static Date from_serial(std::int64_t serial);
};

}  // namespace fxtails
