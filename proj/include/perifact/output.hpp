/* output.hpp — indicator volume writers: legacy structured-points text
 * format, CSV, and the run summary with the recommended isovalue. */

#pragma once

#include <string>

#include "perifact/imaging.hpp"

namespace perifact {

/// Legacy VTK structured-points ASCII file (one scalar field, doubles
/// printed with 17 significant digits so reloads are bit-exact).
void write_volume(const IndicatorGrid& grid, const std::string& path);

/// Reads a file written by write_volume; throws FormatError on malformed
/// headers and TruncatedFileError on short bodies.
IndicatorGrid read_volume(const std::string& path);

/// CSV of (x, y, z, value), one row per grid node plus a header line.
void write_csv(const IndicatorGrid& grid, const std::string& path);

/// Human-readable summary: run metadata, max value and its location, and the
/// recommended isovalue max/3.
void write_summary(const IndicatorGrid& grid, const std::string& path);

/// Writes <base>.vtk, <base>.csv and <base>_summary.txt.
void write_outputs(const IndicatorGrid& grid, const std::string& base);

}  // namespace perifact
