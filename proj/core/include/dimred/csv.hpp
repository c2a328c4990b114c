#pragma once

#include <string>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::cli {

/// Deterministic CSV table: comma separated, '.' decimal point, mandatory
/// header, 17 significant digits so regression fixtures round-trip exactly.
/// Rows are validated against NaN/Inf before they are accepted.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    std::string to_string() const;
    void write_file(const std::string& path) const;

    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<std::string>& columns() const { return columns_; }

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

std::string format_g17(double v);

} // namespace dimred::cli
