#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace nf {

// Calendar date (UTC, proleptic Gregorian). Default-constructed dates are
// invalid; check ok() before arithmetic.
class Date {
public:
    Date() = default;
    Date(int year, unsigned month, unsigned day);

    static std::optional<Date> parse_iso(std::string_view s);  // YYYY-MM-DD
    // Scans free text for the first recognizable date: ISO, "17 July 2025",
    // "July 17, 2025", or "July 2025" (resolved to the last day of the month).
    static std::optional<Date> parse_flexible(std::string_view s);

    bool ok() const;
    int year() const { return y_; }
    unsigned month() const { return m_; }
    unsigned day() const { return d_; }

    std::string iso() const;        // 2025-03-21
    std::string human() const;      // March 21, 2025
    std::string month_key() const;  // 2025-03

    Date add_days(int days) const;
    // Calendar-month shift with end-of-month clamping (2025-03-31 - 1mo ->
    // 2025-02-28).
    Date add_months_clamped(int months) const;

    int days_since_epoch() const;

    friend auto operator<=>(const Date&, const Date&) = default;

private:
    int y_ = 0;
    unsigned m_ = 0;
    unsigned d_ = 0;
};

unsigned last_day_of_month(int year, unsigned month);

}  // namespace nf
