#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "fileio.hpp"
#include "json.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/experiments.hpp"
#include "mixnorm/parse.hpp"

namespace mixnorm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class Int>
Int parse_integer(const std::string& text) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParseError("expected true or false, got '" + text + "'");
}

// Rounded to the 15 significant digits used for every printed number.
double r15(double x) {
  if (!std::isfinite(x)) return x;
  const std::string s = format_number(x);
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

nlohmann::json fit_json(const std::optional<GrowthFit>& fit) {
  if (!fit) return nullptr;
  return {{"slope", r15(fit->slope)},
          {"intercept", r15(fit->intercept)},
          {"stderr", r15(fit->std_error)},
          {"predicted_slope", r15(fit->predicted_slope)}};
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::set<std::string> seen;
  bool m_given = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    }
    try {
      if (key == "kind") {
        c.kind = experiment_kind_from_string(value);
      } else if (key == "m") {
        c.m = parse_integer<std::size_t>(value);
        m_given = true;
      } else if (key == "s") {
        c.s = parse_exponent(value);
      } else if (key == "q_cod") {
        c.q_cod = parse_exponent(value);
      } else if (key == "p") {
        c.p = parse_exponent_list(value);
      } else if (key == "q") {
        c.q = parse_exponent_list(value);
      } else if (key == "n_values") {
        c.n_values = parse_size_list(value);
      } else if (key == "seed") {
        c.seed = parse_integer<std::uint64_t>(value);
      } else if (key == "trials") {
        c.trials = parse_integer<std::size_t>(value);
      } else if (key == "restarts") {
        c.restarts = parse_integer<std::size_t>(value);
      } else if (key == "field") {
        c.field = field_from_string(value);
      } else if (key == "vector_valued") {
        c.vector_valued = parse_bool(value);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!seen.count("kind")) throw ConfigError("config has no kind");
  if (!m_given) {
    if (c.q) {
      c.m = c.q->size();
    } else if (c.p) {
      c.m = c.p->size();
    }
  }
  if (c.p && c.p->size() != c.m) throw ConfigError("p must have length m");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_config(is);
}

void write_csv(std::ostream& os, const ExperimentReport& report) {
  os << "n,mixed_norm,norm_estimate,norm_kind,ratio,seed,config_digest\n";
  for (const auto& r : report.records) {
    os << r.n << ',' << format_number(r.mixed_norm) << ',' << format_number(r.norm_estimate)
       << ',' << to_string(r.norm_kind) << ',' << format_number(r.ratio) << ',' << r.seed << ','
       << r.config_digest << '\n';
  }
}

std::string summary_json(const ExperimentReport& report) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::istringstream canon(report.config.canonical());
  std::string line;
  while (std::getline(canon, line)) {
    const auto eq = line.find('=');
    config[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    records.push_back({{"n", r.n},
                       {"mixed_norm", r15(r.mixed_norm)},
                       {"norm_estimate", r15(r.norm_estimate)},
                       {"norm_kind", to_string(r.norm_kind)},
                       {"ratio", r15(r.ratio)},
                       {"seed", r.seed},
                       {"config_digest", r.config_digest}});
  }

  nlohmann::ordered_json j;
  j["config"] = std::move(config);
  j["config_digest"] = report.config.digest();
  j["records"] = std::move(records);
  j["fit"] = fit_json(report.fit);
  j["certified_fit"] = fit_json(report.certified_fit);
  j["verdict"] = report.verdict ? "PASS" : "FAIL";
  j["headline"] = report.headline;
  j["mode"] = report.mode;
  j["max_ratio"] = r15(report.max_ratio);
  j["max_certified_ratio"] = r15(report.max_certified_ratio);
  j["bound"] = report.bound ? nlohmann::ordered_json(r15(*report.bound)) : nullptr;
  j["certified"] = report.certified;
  j["violations"] = report.violations;
  j["exact_claim_failures"] = report.exact_claim_failures;
  return j.dump(2) + "\n";
}

OutputPaths write_outputs(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir.string());
  const std::string stem = to_string(report.config.kind) + "_" + report.config.digest();
  OutputPaths paths{out_dir / (stem + ".csv"), out_dir / (stem + ".json")};
  std::ostringstream csv;
  write_csv(csv, report);
  detail::write_atomically(paths.csv, csv.str());
  detail::write_atomically(paths.json, summary_json(report));
  return paths;
}

}  // namespace mixnorm
