// SPDX-License-Identifier: Apache-2.0
#include <fairds/rdf/literal.hpp>
#include <fairds/rdf/vocab.hpp>

#include <fmt/format.h>

namespace fairds::rdf
{

UnsupportedDatatype::UnsupportedDatatype(std::string_view datatype):
    Error("unsupported_datatype", fmt::format("datatype <{}> is not supported for lexical validation", datatype))
{
}

namespace
{

    struct Cursor
    {
        std::string_view s;
        std::size_t pos = 0;

        [[nodiscard]] auto done() const noexcept -> bool { return pos >= s.size(); }
        [[nodiscard]] auto peek() const noexcept -> char { return pos < s.size() ? s[pos] : '\0'; }

        auto take(char c) noexcept -> bool
        {
            if (peek() != c)
                return false;
            ++pos;
            return true;
        }

        // Exactly n digits.
        auto digits(std::size_t n, int& out) noexcept -> bool
        {
            out = 0;
            for (std::size_t i = 0; i < n; ++i)
            {
                auto const c = peek();
                if (c < '0' || c > '9')
                    return false;
                out = out * 10 + (c - '0');
                ++pos;
            }
            return true;
        }
    };

    auto is_leap(std::int64_t y) noexcept -> bool
    {
        return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    }

    auto days_in_month(std::int64_t y, int m) noexcept -> int
    {
        constexpr int table[] = { 31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31 };
        return m == 2 && is_leap(y) ? 29 : table[m - 1];
    }

    // Days since 1970-01-01 in the proleptic Gregorian calendar.
    auto days_from_civil(std::int64_t y, int m, int d) noexcept -> std::int64_t
    {
        y -= m <= 2 ? 1 : 0;
        auto const era = (y >= 0 ? y : y - 399) / 400;
        auto const yoe = y - era * 400;
        auto const doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        auto const doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + doe - 719468;
    }

    struct CivilDate
    {
        std::int64_t year;
        int month;
        int day;
    };

    auto civil_from_days(std::int64_t z) noexcept -> CivilDate
    {
        z += 719468;
        auto const era = (z >= 0 ? z : z - 146096) / 146097;
        auto const doe = z - era * 146097;
        auto const yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        auto const doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        auto const mp = (5 * doy + 2) / 153;
        auto const d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
        auto const m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
        return { yoe + era * 400 + (m <= 2 ? 1 : 0), m, d };
    }

    struct DateParts
    {
        std::int64_t year = 0;
        int month = 0;
        int day = 0;
    };

    auto parse_date_part(Cursor& c, DateParts& out) -> bool
    {
        auto const negative = c.take('-');
        auto const start = c.pos;
        auto year = std::int64_t { 0 };
        while (c.peek() >= '0' && c.peek() <= '9')
        {
            if (c.pos - start >= 12)
                return false;
            year = year * 10 + (c.peek() - '0');
            ++c.pos;
        }
        auto const len = c.pos - start;
        if (len < 4 || (len > 4 && c.s[start] == '0'))
            return false;
        out.year = negative ? -year : year;
        if (!c.take('-') || !c.digits(2, out.month) || !c.take('-') || !c.digits(2, out.day))
            return false;
        if (out.month < 1 || out.month > 12)
            return false;
        return out.day >= 1 && out.day <= days_in_month(out.year, out.month);
    }

    // Optional `Z` or `(+|-)hh:mm`; offset in seconds east of UTC.
    auto parse_timezone(Cursor& c, int& offset) -> bool
    {
        offset = 0;
        if (c.done())
            return true;
        if (c.take('Z'))
            return c.done();
        auto const sign = c.peek();
        if (sign != '+' && sign != '-')
            return false;
        ++c.pos;
        int hh = 0;
        int mm = 0;
        if (!c.digits(2, hh) || !c.take(':') || !c.digits(2, mm) || !c.done())
            return false;
        if (hh > 14 || mm > 59 || (hh == 14 && mm != 0))
            return false;
        offset = (sign == '-' ? -1 : 1) * (hh * 3600 + mm * 60);
        return true;
    }

    auto is_integer(std::string_view s) noexcept -> bool
    {
        auto i = std::size_t { 0 };
        if (i < s.size() && (s[i] == '+' || s[i] == '-'))
            ++i;
        if (i == s.size())
            return false;
        for (; i < s.size(); ++i)
        {
            if (s[i] < '0' || s[i] > '9')
                return false;
        }
        return true;
    }

    auto is_decimal(std::string_view s) noexcept -> bool
    {
        auto i = std::size_t { 0 };
        if (i < s.size() && (s[i] == '+' || s[i] == '-'))
            ++i;
        auto digits = std::size_t { 0 };
        auto dot = false;
        for (; i < s.size(); ++i)
        {
            if (s[i] == '.' && !dot)
                dot = true;
            else if (s[i] >= '0' && s[i] <= '9')
                ++digits;
            else
                return false;
        }
        return digits > 0;
    }

    auto is_date(std::string_view s) -> bool
    {
        auto c = Cursor { s };
        auto date = DateParts {};
        int offset = 0;
        return parse_date_part(c, date) && parse_timezone(c, offset);
    }

} // namespace

auto parse_datetime(std::string_view lexical) -> std::optional<Instant>
{
    auto c = Cursor { lexical };
    auto date = DateParts {};
    if (!parse_date_part(c, date) || !c.take('T'))
        return std::nullopt;
    int hour = 0;
    int minute = 0;
    int second = 0;
    if (!c.digits(2, hour) || !c.take(':') || !c.digits(2, minute) || !c.take(':') || !c.digits(2, second))
        return std::nullopt;
    auto nanos = std::int32_t { 0 };
    auto fraction_nonzero = false;
    if (c.take('.'))
    {
        auto const start = c.pos;
        auto scale = std::int32_t { 100'000'000 };
        while (c.peek() >= '0' && c.peek() <= '9')
        {
            auto const digit = c.peek() - '0';
            fraction_nonzero = fraction_nonzero || digit != 0;
            nanos += digit * scale;
            scale /= 10;
            ++c.pos;
        }
        if (c.pos == start)
            return std::nullopt;
    }
    int offset = 0;
    if (!parse_timezone(c, offset))
        return std::nullopt;
    if (hour == 24)
    {
        if (minute != 0 || second != 0 || fraction_nonzero)
            return std::nullopt;
    }
    else if (hour > 23 || minute > 59 || second > 59)
        return std::nullopt;

    auto const days = days_from_civil(date.year, date.month, date.day);
    auto const seconds = days * 86400 + hour * 3600 + minute * 60 + second - offset;
    return Instant { seconds, nanos };
}

auto format_datetime(Instant instant) -> std::string
{
    auto days = instant.seconds / 86400;
    auto rem = instant.seconds % 86400;
    if (rem < 0)
    {
        rem += 86400;
        --days;
    }
    auto const date = civil_from_days(days);
    auto out = fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}", date.year, date.month, date.day, rem / 3600,
                           (rem / 60) % 60, rem % 60);
    if (instant.nanos != 0)
    {
        auto fraction = fmt::format("{:09}", instant.nanos);
        while (fraction.back() == '0')
            fraction.pop_back();
        out += "." + fraction;
    }
    return out + "Z";
}

auto validate_literal(std::string_view lexical, std::string_view datatype) -> bool
{
    if (datatype == vocab::xsd::string || datatype == vocab::rdf::langString)
        return true;
    if (datatype == vocab::xsd::dateTime)
        return parse_datetime(lexical).has_value();
    if (datatype == vocab::xsd::date)
        return is_date(lexical);
    if (datatype == vocab::xsd::integer)
        return is_integer(lexical);
    if (datatype == vocab::xsd::decimal)
        return is_decimal(lexical);
    if (datatype == vocab::xsd::boolean)
        return lexical == "true" || lexical == "false" || lexical == "1" || lexical == "0";
    throw UnsupportedDatatype(datatype);
}

} // namespace fairds::rdf
