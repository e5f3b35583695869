#include "keg/rational.hpp"

#include <cstdlib>
#include <numeric>
#include <stdexcept>

namespace keg {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

std::int64_t to_int64(std::string_view digits) {
  std::int64_t value = 0;
  for (char c : digits) {
    if (value > (INT64_MAX - 9) / 10) throw std::invalid_argument("rational component too large");
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw std::invalid_argument("bad rational: " + std::string(text));
    std::int64_t d = to_int64(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    result = Rational(to_int64(num), d);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)) ||
        (whole.empty() && frac.empty()) || frac.size() > 18)
      throw std::invalid_argument("bad decimal: " + std::string(text));
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational w(whole.empty() ? 0 : to_int64(whole));
    result = w + Rational(frac.empty() ? 0 : to_int64(frac), scale);
  } else {
    if (!all_digits(s)) throw std::invalid_argument("bad rational: " + std::string(text));
    result = Rational(to_int64(s));
  }
  return negative ? -result : result;
}

std::string format_rational(const Rational& r) {
  std::int64_t den = r.denominator();
  std::int64_t rest = den;
  int twos = 0, fives = 0;
  while (rest % 2 == 0) rest /= 2, ++twos;
  while (rest % 5 == 0) rest /= 5, ++fives;
  if (rest != 1 || std::max(twos, fives) > 18)
    return std::to_string(r.numerator()) + "/" + std::to_string(den);
  if (den == 1) return std::to_string(r.numerator());
  return format_fixed(r, std::max(twos, fives));
}

std::string format_fixed(const Rational& r, int decimals) {
  __int128 scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  __int128 num = r.numerator();
  __int128 den = r.denominator();
  bool negative = num < 0;
  if (negative) num = -num;
  __int128 scaled = (num * scale * 2 + den) / (den * 2);
  __int128 whole = scaled / scale, frac = scaled % scale;
  std::string out = std::to_string(static_cast<long long>(whole));
  if (decimals > 0) {
    std::string digits = std::to_string(static_cast<long long>(frac));
    out += "." + std::string(decimals - digits.size(), '0') + digits;
  }
  if (negative && scaled != 0) out = "-" + out;
  return out;
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::vector<std::int64_t> scale_to_integers(const std::vector<Rational>& values) {
  std::int64_t l = 1;
  for (const auto& v : values) {
    std::int64_t g = std::gcd(l, v.denominator());
    __int128 next = static_cast<__int128>(l / g) * v.denominator();
    if (next > (static_cast<__int128>(1) << 40)) throw std::overflow_error("weight denominators too large");
    l = static_cast<std::int64_t>(next);
  }
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    __int128 x = static_cast<__int128>(v.numerator()) * (l / v.denominator());
    if (x > (static_cast<__int128>(1) << 60) || x < -(static_cast<__int128>(1) << 60))
      throw std::overflow_error("scaled weight too large");
    out.push_back(static_cast<std::int64_t>(x));
  }
  return out;
}

}  // namespace keg
