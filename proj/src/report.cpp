#include "ftlab/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>

#include "ftlab/errors.hpp"

namespace ftlab::report {

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string cell_text(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) return format_real(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(c));
}

nlohmann::json cell_json(const Cell& c) {
    if (auto d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) return *d;
        return format_real(*d);  // JSON has no inf/nan
    }
    if (auto i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw DomainError("Table::add: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void write_csv(std::ostream& os, const Table& t, const nlohmann::json& config, bool timestamp) {
    os << "# " << version << "\n";
    if (timestamp) os << "# generated: " << utc_now() << "\n";
    for (const auto& [k, v] : config.items()) os << "# " << k << ": " << v.dump() << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_escape(t.columns[i]);
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << "\n";
    }
}

nlohmann::json table_json(const Table& t) {
    auto arr = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
        arr.push_back(std::move(o));
    }
    return arr;
}

void write_json(std::ostream& os, nlohmann::json payload, const nlohmann::json& config, bool timestamp) {
    nlohmann::json meta = {{"version", version}};
    if (timestamp) meta["generated"] = utc_now();
    nlohmann::json out = nlohmann::json::object();
    out["meta"] = meta;
    out["config"] = config;
    for (auto& [k, v] : payload.items()) out[k] = v;
    os << out.dump(2) << "\n";
}

}  // namespace ftlab::report
