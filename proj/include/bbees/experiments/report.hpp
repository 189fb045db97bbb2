#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bbees {

enum class Comparison { at_most, at_least };

/// One statistic of an experiment with its acceptance budget.
struct ReportRow {
  std::string experiment;
  std::size_t N = 0;
  int dim = 1;
  double t = 0.0;
  std::string statistic;
  double value = 0.0;
  double tolerance = 0.0;  // +inf (at_most) marks an informational row
  Comparison comparison = Comparison::at_most;
  std::size_t replicas = 0;
  std::uint64_t seed_base = 0;

  bool pass() const { return comparison == Comparison::at_most ? value <= tolerance : value >= tolerance; }
};

/// Header: experiment,N,d,t,statistic,value,tolerance,comparison,pass,replicas,seed_base
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::string report_csv(const std::vector<ReportRow>& rows);
/// {"experiment":..,"rows":[..],"all_pass":..}
std::string report_summary_json(const std::string& experiment, const std::vector<ReportRow>& rows);
bool all_pass(const std::vector<ReportRow>& rows);

}  // namespace bbees
