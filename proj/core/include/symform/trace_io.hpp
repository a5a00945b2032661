#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "symform/maneuver.hpp"

namespace symform {

/// Column header of a trace CSV: t, p{i}_x, p{i}_y[, p{i}_z] per agent,
/// e{u}_{v} per edge, potential.
std::vector<std::string> trace_header(const SimulationTrace& trace);

/// Decimal with 17 significant digits; parses back to the same double.
std::string format_double(double v);

void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const SimulationTrace& trace);

/// t, r_x, r_y[, r_z], then the angle (plane) or the 9 entries of R
/// row-major (space), then scale.
void write_reference_csv(const std::filesystem::path& path, const std::vector<ReferenceState>& reference);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric CSV with a header row. Throws ConfigError with the line
/// number on malformed input.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Agent paths projected on the x-y plane, with the reference path when given.
void write_paths_svg(const std::filesystem::path& path, const SimulationTrace& trace,
                     const std::vector<ReferenceState>* reference = nullptr);
/// Per-edge error norms against time on a log10 axis.
void write_errors_svg(const std::filesystem::path& path, const SimulationTrace& trace);

}  // namespace symform
