#pragma once

// Deterministic text output helpers.  Doubles are rendered with the shortest
// representation that round-trips exactly, so identical inputs always produce
// byte-identical files regardless of locale.

#include <string>
#include <vector>

namespace qswitch {

// Shortest round-trip decimal form; "nan", "inf", "-inf" for specials.
std::string format_double(double x);

// One CSV line (no trailing newline); fields are used verbatim, so callers
// must not pass embedded commas or newlines.
std::string csv_join(const std::vector<std::string>& fields);

struct CsvWriter {
  std::string buffer;

  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  // Write the accumulated table ("\n" newlines) to a file, or "-" for stdout.
  void save(const std::string& path) const;
};

}  // namespace qswitch
