#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace keg {

using Rational = boost::rational<std::int64_t>;

// Accepts "3", "-2", "0.125", "7/3". Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

// Finite decimal when the denominator only has factors 2 and 5, otherwise "p/q".
std::string format_rational(const Rational& r);

// Fixed-point rendering for reports, rounded half away from zero.
std::string format_fixed(const Rational& r, int decimals);

double to_double(const Rational& r);

// Scales every value by the lcm of the denominators. Throws std::overflow_error
// if the scaled integers do not fit comfortably in 62 bits.
std::vector<std::int64_t> scale_to_integers(const std::vector<Rational>& values);

}  // namespace keg
