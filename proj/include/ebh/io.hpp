#pragma once

// Sweep output. CSV: one header line with the column names, one line per
// row, values in scientific notation with 17 significant digits and the
// literal `nan` for quantities that were not computed. JSON: an array of
// objects keyed by the same column names, `"nan"` for missing values.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ebh/sweep.hpp"

namespace ebh {

enum class Format { csv, json };

Format parse_format(const std::string& name);

/// Decimal rendering used for every CSV cell.
std::string format_value(double v);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, Axis axis);
void write_json(std::ostream& os, const std::vector<SweepRow>& rows, Axis axis);

struct SweepTable {
  Axis axis = Axis::J;
  std::vector<SweepRow> rows;
};

/// Parses output of write_csv / write_json. Throws std::runtime_error on a
/// malformed header, row or value.
SweepTable read_csv(std::istream& is);
SweepTable read_json(std::istream& is);

/// Writes rows to `path`; throws std::runtime_error on I/O failure.
void emit(const std::vector<SweepRow>& rows, Axis axis, Format format,
          const std::filesystem::path& path);

}  // namespace ebh
