#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mixnorm/errors.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& token, std::size_t line_no) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse number '" + token + "'");
  }
  return v;
}

std::size_t parse_size(const std::string& token, std::size_t line_no) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v == 0) {
    throw ParseError("line " + std::to_string(line_no) + ": bad dimension '" + token + "'");
  }
  return v;
}

}  // namespace

std::string format_exact(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

const std::string* TensorFileHeader::find(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

void write_tensor(std::ostream& os, const CoefficientTensor& t) {
  os << "shape:";
  for (std::size_t n : t.shape()) os << ' ' << n;
  if (t.has_codomain()) os << " codomain " << t.codomain_length();
  os << '\n';
  if (t.is_complex()) {
    for (const Complex& z : t.complex_values()) {
      os << format_exact(z.real()) << ' ' << format_exact(z.imag()) << '\n';
    }
  } else {
    for (double x : t.real_values()) os << format_exact(x) << '\n';
  }
}

CoefficientTensor read_tensor(std::istream& is) {
  TensorFileHeader header;
  return read_tensor(is, header);
}

CoefficientTensor read_tensor(std::istream& is, TensorFileHeader& header) {
  header.fields.clear();
  std::string raw;
  std::size_t line_no = 0;
  Shape shape;
  std::optional<std::size_t> codomain;
  bool have_shape = false;
  std::vector<double> re;
  std::vector<double> im;
  bool any_complex = false;

  while (std::getline(is, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (const auto colon = line.find(':'); colon != std::string::npos) {
      if (!re.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": header after data");
      }
      const std::string key = trim(line.substr(0, colon));
      const std::string value = trim(line.substr(colon + 1));
      header.fields.emplace_back(key, value);
      if (key == "shape") {
        std::istringstream ss(value);
        std::string tok;
        while (ss >> tok) {
          if (tok == "codomain") {
            if (!(ss >> tok)) throw ParseError("shape: codomain length missing");
            codomain = parse_size(tok, line_no);
            if (ss >> tok) throw ParseError("shape: trailing tokens after codomain length");
            break;
          }
          shape.push_back(parse_size(tok, line_no));
        }
        if (shape.empty()) throw ParseError("shape: no dimensions given");
        have_shape = true;
      }
      continue;
    }

    if (!have_shape) {
      throw ParseError("line " + std::to_string(line_no) + ": data before the shape header");
    }
    std::istringstream ss(line);
    std::string a;
    std::string b;
    std::string extra;
    ss >> a;
    const bool two = static_cast<bool>(ss >> b);
    if (ss >> extra) {
      throw ParseError("line " + std::to_string(line_no) + ": expected one or two numbers");
    }
    re.push_back(parse_double(a, line_no));
    im.push_back(two ? parse_double(b, line_no) : 0.0);
    any_complex = any_complex || two;
  }

  if (!have_shape) throw ParseError("missing `shape:` header");
  try {
    if (any_complex) {
      std::vector<Complex> z(re.size());
      for (std::size_t i = 0; i < re.size(); ++i) z[i] = Complex(re[i], im[i]);
      return CoefficientTensor(shape, std::move(z), codomain);
    }
    return CoefficientTensor(shape, std::move(re), codomain);
  } catch (const DomainError& e) {
    throw ParseError(std::string("tensor file: ") + e.what());
  }
}

}  // namespace mixnorm
