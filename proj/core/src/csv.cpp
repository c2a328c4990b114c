#include "dimred/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dimred::cli {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw config_error("csv: header must not be empty");
}

void CsvTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw config_error("csv: row width mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw numerical_error("csv: non-finite value in emitted row");
    rows_.push_back(values);
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << "\n";
    for (const auto& row : rows_) {
        for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_g17(row[c]);
        out << "\n";
    }
    return out.str();
}

void CsvTable::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("csv: cannot write '" + path + "'");
    out << to_string();
}

} // namespace dimred::cli
