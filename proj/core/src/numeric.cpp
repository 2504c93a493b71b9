#include "debris/numeric.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <system_error>

namespace debris {
namespace {

// Decimal rounding of the shortest fixed representation in `text`.
double round_decimal_text(const char* first, const char* last) {
  bool negative = false;
  if (first != last && *first == '-') {
    negative = true;
    ++first;
  }
  std::int64_t units = 0;
  const char* p = first;
  for (; p != last && *p != '.'; ++p) units = units * 10 + (*p - '0');
  int taken = 0;
  bool round_up = false;
  if (p != last) {
    ++p;
    for (; p != last; ++p, ++taken) {
      if (taken < 4) {
        units = units * 10 + (*p - '0');
      } else {
        round_up = *p >= '5';
        break;
      }
    }
  }
  for (; taken < 4; ++taken) units *= 10;
  if (round_up) ++units;
  double v = static_cast<double>(units) / 1e4;
  return negative ? -v : v;
}

template <typename T>
T round4(T x) {
  if (!std::isfinite(x) || std::fabs(x) >= T(1e12)) return x;
  const double scaled = static_cast<double>(x) * 1e4;
  const double frac = std::fabs(scaled) - std::floor(std::fabs(scaled));
  double r;
  if (std::fabs(frac - 0.5) > 1e-6) {
    r = std::round(scaled) / 1e4;
  } else {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
    r = round_decimal_text(buf, res.ptr);
  }
  if (r == 0.0) r = 0.0;  // no negative zero
  return static_cast<T>(r);
}

}  // namespace

double round_to_4dp(double x) { return round4(x); }
float round_to_4dp(float x) { return round4(x); }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double round_sig10(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return std::strtod(buf, nullptr);
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace debris
