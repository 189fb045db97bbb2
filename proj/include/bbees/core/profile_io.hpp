#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "bbees/core/radial_profile.hpp"

namespace bbees {

/// Shortest text with 17 significant digits that parses back to the same double.
std::string format_double(double x);

/// CSV with header `r,value`: one row per jump and a terminal row at domain_cap.
void write_profile_csv(std::ostream& out, const RadialProfile& f);
RadialProfile read_profile_csv(std::istream& in);
RadialProfile read_profile_csv_file(const std::string& path);

/// JSON object {"dim": d, "jumps": [[r, v], ...], "domain_cap": c}; dim is optional.
std::string profile_to_json(const RadialProfile& f, std::optional<int> dim = std::nullopt);
RadialProfile profile_from_json(const std::string& text);

}  // namespace bbees
