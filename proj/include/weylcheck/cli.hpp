#pragma once

// Run configuration, config files, CSV/JSON emission and plot data for the
// weylcheck command-line tool.

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylcheck/suites.hpp"

namespace weylcheck::cli {

enum class Format { csv, json };

/// Raised for bad configuration; the tool maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;  // resolved, including defaults
  std::string output_path;                    // empty: stdout
  Format format = Format::csv;
  unsigned parallelism = 1;
  std::int64_t seed = 20240601;

  /// Every key with its resolved value, globals included, in a stable order.
  std::vector<std::pair<std::string, std::string>> resolved() const {
    std::vector<std::pair<std::string, std::string>> out{{"command", command},
                                                         {"format", format == Format::csv ? "csv" : "json"},
                                                         {"parallelism", std::to_string(parallelism)},
                                                         {"seed", std::to_string(seed)}};
    for (const auto& kv : params) out.push_back(kv);
    return out;
  }

  const std::string& get(const std::string& key) const {
    const auto it = params.find(key);
    if (it == params.end()) throw ConfigError("missing parameter '" + key + "'");
    return it->second;
  }
  double number(const std::string& key) const {
    const auto& s = get(key);
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("parameter '" + key + "': expected a number, got '" + s + "'");
    }
  }
  std::int64_t integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v)) throw ConfigError("parameter '" + key + "': expected an integer, got '" + get(key) + "'");
    return static_cast<std::int64_t>(v);
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        out.push_back(std::stod(item));
      } catch (const std::logic_error&) {
        throw ConfigError("parameter '" + key + "': bad list entry '" + item + "'");
      }
    }
    if (out.empty()) throw ConfigError("parameter '" + key + "': empty list");
    return out;
  }
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Parses `key = value` lines; `#` starts a comment. Keys outside `allowed` are rejected.
inline std::map<std::string, std::string> parse_config(std::istream& in, const std::set<std::string>& allowed,
                                                       const std::string& source = "config") {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (out.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline std::map<std::string, std::string> load_config(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, allowed, path);
}

/// Recovers the configuration embedded in a CSV output header.
inline std::map<std::string, std::string> embedded_config(std::istream& csv) {
  std::map<std::string, std::string> out;
  std::string line;
  const std::string tag = "# config: ";
  while (std::getline(csv, line)) {
    if (line.rfind(tag, 0) != 0) continue;
    const auto body = line.substr(tag.size());
    const auto eq = body.find('=');
    if (eq != std::string::npos) out[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
  }
  return out;
}

// ---------------------------------------------------------------- emission

inline std::string csv_field(const Cell& c) {
  auto s = format_cell(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

/// Timing is left out so that identical configurations give identical bytes.
inline void write_csv(std::ostream& os, const RunConfig& cfg, const std::vector<SuiteResult>& suites) {
  os << "# weylcheck " << cfg.command << "\n";
  for (const auto& [k, v] : cfg.resolved()) os << "# config: " << k << " = " << v << "\n";
  for (const auto& s : suites) {
    os << "# suite: " << s.name << " " << to_string(s.verdict) << " passed=" << s.passed << " failed=" << s.failed
       << " inconclusive=" << s.inconclusive << "\n";
    for (const auto& [k, v] : s.metrics) os << "# metric: " << k << " = " << format_cell(v) << "\n";
    for (const auto& n : s.notes) os << "# note: " << n << "\n";
    for (std::size_t i = 0; i < s.columns.size(); ++i) os << (i ? "," : "") << s.columns[i];
    os << "\n";
    for (const auto& row : s.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << "\n";
    }
  }
}

inline nlohmann::ordered_json to_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(format_cell(c));
  return std::get<std::string>(c);
}

inline void write_json(std::ostream& os, const RunConfig& cfg, const std::vector<SuiteResult>& suites) {
  nlohmann::ordered_json j;
  j["config"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : cfg.resolved()) j["config"][k] = v;
  j["suites"] = nlohmann::ordered_json::array();
  for (const auto& s : suites) {
    nlohmann::ordered_json o;
    o["name"] = s.name;
    o["verdict"] = std::string(to_string(s.verdict));
    o["counts"] = {{"passed", s.passed}, {"failed", s.failed}, {"inconclusive", s.inconclusive}};
    o["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.metrics) o["metrics"][k] = to_json(v);
    o["notes"] = s.notes;
    o["columns"] = s.columns;
    o["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : s.rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (const auto& c : row) r.push_back(to_json(c));
      o["rows"].push_back(r);
    }
    j["suites"].push_back(o);
  }
  os << j.dump(2) << "\n";
}

struct PlotFit {
  std::size_t rows = 0, excluded = 0;
  std::optional<double> c_third, c_half;  // least-squares c in modulus ~ c t^alpha
};

/// Two-column (t, modulus) data for accepted records, then reference curves
/// c t^{1/3} and c t^{1/2} as separate blocks (two blank lines apart).
inline PlotFit emit_plotdata(const std::vector<ScanRecord>& records, std::ostream& os) {
  if (records.empty()) throw std::invalid_argument("emit_plotdata: no records");
  PlotFit fit;
  std::vector<const ScanRecord*> keep;
  for (const auto& r : records) (r.accepted ? keep.push_back(&r) : void(++fit.excluded));
  fit.rows = keep.size();
  auto coef = [&](double alpha) {
    double num = 0, den = 0;
    for (const auto* r : keep) {
      const double p = std::pow(std::max(r->t, 1.0), alpha);
      num += r->modulus * p;
      den += p * p;
    }
    return num / den;
  };
  if (keep.size() >= 2) {
    fit.c_third = coef(1.0 / 3.0);
    fit.c_half = coef(0.5);
  }
  char buf[64];
  os << "# weylcheck plot data: t modulus\n";
  os << "# rows " << fit.rows << " excluded " << fit.excluded << " (consistency gap above gate)\n";
  if (fit.c_third) {
    std::snprintf(buf, sizeof buf, "%.10g", *fit.c_third);
    os << "# fit c_third " << buf;
    std::snprintf(buf, sizeof buf, "%.10g", *fit.c_half);
    os << " c_half " << buf << "\n";
  } else {
    os << "# fit skipped: fewer than 2 accepted records\n";
  }
  os << "# block data\n";
  for (const auto* r : keep) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", r->t, r->modulus);
    os << buf;
  }
  if (!fit.c_third) return fit;
  for (const auto& [label, alpha, c] :
       {std::tuple{"c t^(1/3)", 1.0 / 3.0, *fit.c_third}, std::tuple{"c t^(1/2)", 0.5, *fit.c_half}}) {
    os << "\n\n# block reference " << label << "\n";
    for (const auto* r : keep) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", r->t, c * std::pow(std::max(r->t, 1.0), alpha));
      os << buf;
    }
  }
  return fit;
}

inline PlotFit emit_plotdata(const std::vector<ScanRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("emit_plotdata: cannot write '" + path + "'");
  auto fit = emit_plotdata(records, os);
  if (!os) throw std::runtime_error("emit_plotdata: write failed for '" + path + "'");
  return fit;
}

}  // namespace weylcheck::cli
