#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace crimenet {

// Calendar month, the time resolution of the whole pipeline.
struct Month {
  int year = 0;
  int month = 1;  // 1..12

  friend auto operator<=>(const Month&, const Month&) = default;
};

Month add_months(Month m, int k);

// Signed distance in months, to - from.
int months_between(Month from, Month to);

// Parses "YYYY-MM". Returns nullopt on anything else.
std::optional<Month> parse_month(std::string_view s);

std::string format_month(Month m);

// Contiguous run of months addressed by 0-based index.
struct MonthSpan {
  Month first;
  int count = 0;

  int index_of(Month m) const {
    int i = months_between(first, m);
    return (i >= 0 && i < count) ? i : -1;
  }
  Month at(int i) const { return add_months(first, i); }
  bool contains(Month m) const { return index_of(m) >= 0; }
  Month last() const { return add_months(first, count - 1); }

  friend bool operator==(const MonthSpan&, const MonthSpan&) = default;
};

}  // namespace crimenet
