// Flat-file output: CSV tables with round-trippable numbers and atomic writes.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "springlink/design_space.hpp"

namespace springlink::io {

/// 17 significant digits; infinities print as "inf" / "-inf".
std::string format_number(double value);

/// Parses a number written by format_number. Throws DataError.
double parse_number(std::string_view text);

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Comma-separated, LF line endings, one header row.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

/// Parses "min:max:count". Throws ConfigError unless count >= 2 and min <= max.
Axis parse_axis(std::string_view spec, std::string name);

/// Parses a comma-separated list of numbers. Throws ConfigError.
std::vector<double> parse_list(std::string_view spec);

CsvTable torque_table(const TorqueProfile& profile);
CsvTable sweep_table(const SweepGrid& grid);
CsvTable family_summary_table(const std::vector<FamilyMember>& family);
CsvTable family_grid_table(const std::vector<FamilyMember>& family);
CsvTable solution_space_table(const SolutionSpace& space);
CsvTable boundary_table(const SolutionSpace& space);

}  // namespace springlink::io
