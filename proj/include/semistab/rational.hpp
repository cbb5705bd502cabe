#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <optional>
#include <string>

namespace semistab {

using bigint = boost::multiprecision::cpp_int;
using rat = boost::multiprecision::cpp_rational;

inline bigint rat_num(const rat& x) { return boost::multiprecision::numerator(x); }
inline bigint rat_den(const rat& x) { return boost::multiprecision::denominator(x); }

// canonical lowest-terms "p/q" with positive q (cpp_rational normalizes itself)
inline std::string fraction_string(const rat& x) {
  return rat_num(x).str() + "/" + rat_den(x).str();
}

// strict "p", "-p", "p/q" or "-p/q"; the denominator must be a positive integer
inline std::optional<rat> parse_fraction(const std::string& s) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && s[pos] == '-') {
    neg = true;
    ++pos;
  }
  auto scan_digits = [&](std::size_t& p) -> std::optional<std::string> {
    std::size_t start = p;
    while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    if (p == start) return std::nullopt;
    return s.substr(start, p - start);
  };
  auto numerator_digits = scan_digits(pos);
  if (!numerator_digits) return std::nullopt;
  bigint n(*numerator_digits);
  bigint d = 1;
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    auto denominator_digits = scan_digits(pos);
    if (!denominator_digits) return std::nullopt;
    d = bigint(*denominator_digits);
  }
  if (pos != s.size()) return std::nullopt;
  if (d == 0) return std::nullopt;
  if (neg) n = -n;
  return rat(n, d);
}

}  // namespace semistab
