#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace longevity::cli {

// Shortest decimal that round-trips, locale independent. Infinities print
// as "inf"/"-inf", NaN as "nan".
std::string format_number(double x);

// JSON value for a possibly infinite number; infinities become strings.
nlohmann::json json_number(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Writes to a temporary sibling and renames it over `path`, so readers never
// observe a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace longevity::cli
