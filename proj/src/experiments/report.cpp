#include "bbees/experiments/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bbees/core/profile_io.hpp"

namespace bbees {

namespace {

const char* comparison_name(Comparison c) { return c == Comparison::at_most ? "at_most" : "at_least"; }

}  // namespace

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "experiment,N,d,t,statistic,value,tolerance,comparison,pass,replicas,seed_base\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.N << ',' << r.dim << ',' << format_double(r.t) << ',' << r.statistic << ','
        << format_double(r.value) << ',' << format_double(r.tolerance) << ',' << comparison_name(r.comparison)
        << ',' << (r.pass() ? "true" : "false") << ',' << r.replicas << ',' << r.seed_base << '\n';
  }
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  write_report_csv(s, rows);
  return s.str();
}

bool all_pass(const std::vector<ReportRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass(); });
}

std::string report_summary_json(const std::string& experiment, const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["all_pass"] = all_pass(rows);
  auto& arr = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["statistic"] = r.statistic;
    o["N"] = r.N;
    o["d"] = r.dim;
    o["t"] = r.t;
    o["value"] = r.value;
    if (std::isfinite(r.tolerance)) {
      o["tolerance"] = r.tolerance;
    } else {
      o["tolerance"] = nullptr;
    }
    o["comparison"] = comparison_name(r.comparison);
    o["pass"] = r.pass();
    o["replicas"] = r.replicas;
    o["seed_base"] = r.seed_base;
    arr.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

}  // namespace bbees
