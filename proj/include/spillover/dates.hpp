#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace spillover {

/// Calendar date, timezone-free. Stored as days since 1970-01-01 so that
/// ordering and set operations are plain integer work.
class Date {
  public:
    Date() = default;
    explicit Date(int serial_days) : serial_(serial_days) {}

    static Date from_ymd(int year, int month, int day);

    /// Parse "YYYY-MM-DD". Throws data_error on malformed input or an
    /// impossible calendar date.
    static Date parse(std::string_view iso);

    int serial() const { return serial_; }
    std::string to_string() const;  // ISO-8601, "YYYY-MM-DD"

    Date next_day() const { return Date(serial_ + 1); }

    auto operator<=>(const Date&) const = default;

  private:
    int serial_ = 0;
};

}  // namespace spillover
