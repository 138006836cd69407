#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "anchorplan/ins_drift.hpp"
#include "anchorplan/localization_geometry.hpp"

namespace anchorplan {

/// Shortest round-trip decimal form, '.' separator, locale independent.
std::string format_double(double value);

/// Error series with header `delta_p,variance_m2`.
std::vector<SeriesPoint> read_error_series_csv(std::istream& in);
std::vector<SeriesPoint> read_error_series_csv_file(const std::filesystem::path& path);

/// `x_m,y_m,crlb_m2,covered`; uncovered cells leave crlb_m2 empty.
void write_field_csv(std::ostream& out, const CrlbField& field);

}  // namespace anchorplan
