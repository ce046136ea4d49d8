#include "crimenet/month.hpp"

#include <cstdio>

namespace crimenet {

Month add_months(Month m, int k) {
  int zero_based = m.year * 12 + (m.month - 1) + k;
  int year = zero_based / 12;
  int month = zero_based % 12;
  if (month < 0) {
    month += 12;
    year -= 1;
  }
  return Month{year, month + 1};
}

int months_between(Month from, Month to) {
  return (to.year - from.year) * 12 + (to.month - from.month);
}

std::optional<Month> parse_month(std::string_view s) {
  if (s.size() != 7 || s[4] != '-') return std::nullopt;
  for (int i : {0, 1, 2, 3, 5, 6})
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  int year = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
  int month = (s[5] - '0') * 10 + (s[6] - '0');
  if (month < 1 || month > 12) return std::nullopt;
  return Month{year, month};
}

std::string format_month(Month m) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
  return buf;
}

}  // namespace crimenet
