#include "bbees/core/profile_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bbees/core/errors.hpp"

namespace bbees {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_profile_csv(std::ostream& out, const RadialProfile& f) {
  out << "r,value\n";
  for (const auto& j : f.jumps()) out << format_double(j.location) << ',' << format_double(j.value) << '\n';
  out << format_double(f.domain_cap()) << ',' << format_double(f.terminal_value()) << '\n';
}

namespace {

double parse_number(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ConfigError("profile CSV line " + std::to_string(line) + ": cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

RadialProfile read_profile_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<RadialProfile::Jump> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("r,", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("profile CSV line " + std::to_string(lineno) + ": expected r,value");
    rows.push_back({parse_number(line.substr(0, comma), lineno), parse_number(line.substr(comma + 1), lineno)});
  }
  if (rows.empty()) throw ConfigError("profile CSV: no rows");
  const auto terminal = rows.back();
  rows.pop_back();
  const double last = rows.empty() ? 0.0 : rows.back().value;
  if (terminal.value != last) throw ConfigError("profile CSV: terminal row value must repeat the last jump value");
  return RadialProfile(std::move(rows), terminal.location);
}

RadialProfile read_profile_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file '" + path + "'");
  return read_profile_csv(in);
}

std::string profile_to_json(const RadialProfile& f, std::optional<int> dim) {
  // Written by hand so that numbers keep 17 significant digits.
  std::ostringstream os;
  os << '{';
  if (dim) os << "\"dim\":" << *dim << ',';
  os << "\"jumps\":[";
  bool first = true;
  for (const auto& j : f.jumps()) {
    if (!first) os << ',';
    first = false;
    os << '[' << format_double(j.location) << ',' << format_double(j.value) << ']';
  }
  os << "],\"domain_cap\":" << format_double(f.domain_cap()) << '}';
  return os.str();
}

RadialProfile profile_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("profile JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("jumps") || !j["jumps"].is_array()) {
    throw ConfigError("profile JSON: expected an object with a 'jumps' array");
  }
  std::vector<RadialProfile::Jump> jumps;
  for (const auto& p : j["jumps"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw ConfigError("profile JSON: each jump must be [r, value]");
    }
    jumps.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  double cap = RadialProfile::default_cap(jumps);
  if (j.contains("domain_cap")) cap = j["domain_cap"].get<double>();
  return RadialProfile(std::move(jumps), cap);
}

}  // namespace bbees
