#pragma once

#include <string>
#include <vector>

#include "dimred/config.hpp"
#include "dimred/csv.hpp"

namespace dimred::cli {

struct RunResult {
    int exit_code = 0; // 0 ok, 1 config/runtime error, 2 check failure
    CsvTable table{std::vector<std::string>{"empty"}};
    // extra tables written alongside the main CSV (suffix, table)
    std::vector<std::pair<std::string, CsvTable>> extra;
    std::vector<std::string> messages; // human-readable check log
};

/// One full sweep for the configured model: rows, optional acceptance
/// assertions, deterministic ordering. Throws config_error for invalid
/// configs; numeric failures surface as numerical_error.
RunResult run_sweep(const SweepConfig& cfg);

/// run_sweep plus artifact emission (CSV, optional plots) and the exit-code
/// contract of the command-line front end.
int run_and_emit(const SweepConfig& cfg);

} // namespace dimred::cli
