#pragma once

#include <string>
#include <vector>

#include "vendor_json.hpp"

namespace loewner::io {

// Writes via a temp file in the same directory followed by rename, so a
// partially written artifact is never observed under the final name.
void atomic_write(const std::string& path, const std::string& contents);

// CSV: comma separated, header row, '.' decimal point, locale-independent.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string to_string() const;
};

std::string format_double(double x);

// Estimator envelope: {"meta": {...}, "data": [...]}.
nlohmann::json make_envelope(const nlohmann::json& meta, const nlohmann::json& data);

// Build/version string embedded in every meta block.
std::string version_string();

} // namespace loewner::io
