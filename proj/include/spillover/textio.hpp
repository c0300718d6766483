#pragma once

#include <string>
#include <vector>

namespace spillover {

/// Fixed 6-significant-digit formatting for every numeric value written to
/// a report, so that identical runs produce identical bytes. NaN prints as
/// "NA", infinities as "Inf"/"-Inf", and negative zero is normalized.
std::string fmt6(double v);

/// Join fields with commas. Fields are written as-is; callers format
/// numbers with fmt6 first.
std::string csv_line(const std::vector<std::string>& fields);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// Hex-encoded SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Levenshtein edit distance, used for near-miss key suggestions.
std::size_t edit_distance(const std::string& a, const std::string& b);

}  // namespace spillover
