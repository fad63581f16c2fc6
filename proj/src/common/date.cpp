#include "nf/common/date.h"

#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <regex>

namespace nf {

namespace {

namespace chr = std::chrono;

chr::year_month_day to_ymd(const Date& d) {
    return chr::year{d.year()} / chr::month{d.month()} / chr::day{d.day()};
}

Date from_ymd(const chr::year_month_day& ymd) {
    return Date(int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
}

const std::array<std::string, 12> kMonthNames = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

int month_from_name(std::string_view name) {
    if (name.size() < 3) return 0;
    std::string lower;
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (size_t i = 0; i < kMonthNames.size(); ++i) {
        std::string full;
        for (char c : kMonthNames[i]) full.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (lower == full || lower == full.substr(0, 3)) return static_cast<int>(i) + 1;
    }
    return 0;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) : y_(year), m_(month), d_(day) {}

bool Date::ok() const {
    if (y_ == 0 && m_ == 0 && d_ == 0) return false;
    return (chr::year{y_} / chr::month{m_} / chr::day{d_}).ok();
}

std::optional<Date> Date::parse_iso(std::string_view s) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (std::sscanf(std::string(s).c_str(), "%d-%u-%u", &y, &m, &d) != 3) return std::nullopt;
    Date date(y, m, d);
    if (!date.ok()) return std::nullopt;
    return date;
}

std::optional<Date> Date::parse_flexible(std::string_view s) {
    static const std::regex iso_re(R"((\d{4})-(\d{1,2})-(\d{1,2}))");
    static const std::regex dmy_re(R"((\d{1,2})(?:st|nd|rd|th)?\s+([A-Za-z]{3,9}),?\s+(\d{4}))");
    static const std::regex mdy_re(R"(([A-Za-z]{3,9})\s+(\d{1,2})(?:st|nd|rd|th)?,?\s+(\d{4}))");
    static const std::regex my_re(R"(([A-Za-z]{3,9}),?\s+(\d{4}))");

    const std::string text(s);
    std::smatch m;

    if (std::regex_search(text, m, iso_re)) {
        Date d(std::stoi(m[1]), static_cast<unsigned>(std::stoul(m[2])),
               static_cast<unsigned>(std::stoul(m[3])));
        if (d.ok()) return d;
    }
    if (std::regex_search(text, m, dmy_re)) {
        int month = month_from_name(m[2].str());
        if (month > 0) {
            Date d(std::stoi(m[3]), static_cast<unsigned>(month),
                   static_cast<unsigned>(std::stoul(m[1])));
            if (d.ok()) return d;
        }
    }
    if (std::regex_search(text, m, mdy_re)) {
        int month = month_from_name(m[1].str());
        if (month > 0) {
            Date d(std::stoi(m[3]), static_cast<unsigned>(month),
                   static_cast<unsigned>(std::stoul(m[2])));
            if (d.ok()) return d;
        }
    }
    if (std::regex_search(text, m, my_re)) {
        int month = month_from_name(m[1].str());
        if (month > 0) {
            int year = std::stoi(m[2]);
            Date d(year, static_cast<unsigned>(month), last_day_of_month(year, static_cast<unsigned>(month)));
            if (d.ok()) return d;
        }
    }
    return std::nullopt;
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y_, m_, d_);
    return buf;
}

std::string Date::human() const {
    if (m_ < 1 || m_ > 12) return iso();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s %u, %d", kMonthNames[m_ - 1].c_str(), d_, y_);
    return buf;
}

std::string Date::month_key() const {
    char buf[12];
    std::snprintf(buf, sizeof(buf), "%04d-%02u", y_, m_);
    return buf;
}

Date Date::add_days(int days) const {
    chr::sys_days sd{to_ymd(*this)};
    return from_ymd(chr::year_month_day{sd + chr::days{days}});
}

Date Date::add_months_clamped(int months) const {
    chr::year_month_day ymd = to_ymd(*this);
    ymd += chr::months{months};
    if (!ymd.ok()) {
        ymd = ymd.year() / ymd.month() / chr::last;
    }
    return from_ymd(ymd);
}

int Date::days_since_epoch() const {
    return static_cast<int>(chr::sys_days{to_ymd(*this)}.time_since_epoch().count());
}

unsigned last_day_of_month(int year, unsigned month) {
    chr::year_month_day_last l = chr::year{year} / chr::month{month} / chr::last;
    return unsigned(l.day());
}

}  // namespace nf
