#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace ftlab::report {

inline constexpr const char* version = "ftlab 1.0.0";

using Cell = std::variant<double, long long, std::string>;

// Long-format table; one header row, RFC 4180 quoting, 17 significant digits.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

std::string format_real(double x);
std::string csv_escape(const std::string& s);

// Comment lines "# key: value" echoing the config, then the table.
void write_csv(std::ostream& os, const Table& t, const nlohmann::json& config, bool timestamp);
nlohmann::json table_json(const Table& t);
// {"meta": {...}, "config": ..., <payload keys>}
void write_json(std::ostream& os, nlohmann::json payload, const nlohmann::json& config, bool timestamp);

}  // namespace ftlab::report
