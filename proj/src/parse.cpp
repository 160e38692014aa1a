#include "mixnorm/parse.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "mixnorm/errors.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_decimal(const std::string& text, const std::string& whole) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParseError("cannot parse number '" + whole + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  if (out.empty()) throw ParseError("empty list");
  return out;
}

}  // namespace

double parse_number(const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "inf" || text == "+inf" || text == "infinity") return kInf;
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const double num = parse_decimal(trim(text.substr(0, slash)), text);
    const double den = parse_decimal(trim(text.substr(slash + 1)), text);
    if (den == 0.0) throw ParseError("zero denominator in '" + text + "'");
    return num / den;
  }
  const double v = parse_decimal(text, text);
  if (std::isnan(v)) throw ParseError("not a number: '" + text + "'");
  return v;
}

double parse_exponent(const std::string& text) {
  const double v = parse_number(text);
  if (!(v >= 1.0)) throw ParseError("exponent '" + trim(text) + "' is below 1");
  return v;
}

ExponentVector parse_exponent_list(const std::string& text) {
  std::vector<double> values;
  for (const auto& tok : split_list(text)) values.push_back(parse_exponent(tok));
  return ExponentVector(std::move(values));
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : split_list(text)) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0) {
      throw ParseError("expected a positive integer, got '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::string format_exponent(double p) { return p == kInf ? "inf" : format_exact(p); }

std::string format_exponent_list(std::span<const double> values, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += format_exponent(values[i]);
  }
  return out;
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 15);
  return std::string(buf, ptr);
}

}  // namespace mixnorm
