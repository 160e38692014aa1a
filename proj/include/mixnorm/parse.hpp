#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mixnorm/exponents.hpp"

namespace mixnorm {

/// Parses `inf`, a decimal, or a fraction `a/b` (e.g. `4/3`). Locale-independent.
double parse_number(const std::string& text);

/// parse_number restricted to values >= 1.
double parse_exponent(const std::string& text);

/// Comma- and/or whitespace-separated exponents.
ExponentVector parse_exponent_list(const std::string& text);

/// Comma- and/or whitespace-separated positive integers.
std::vector<std::size_t> parse_size_list(const std::string& text);

/// `inf` or the shortest round-trip decimal.
std::string format_exponent(double p);
std::string format_exponent_list(std::span<const double> values, const std::string& sep = ",");

/// 15 significant digits, locale-independent.
std::string format_number(double x);

}  // namespace mixnorm
