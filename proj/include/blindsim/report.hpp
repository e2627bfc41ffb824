#pragma once

#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "blindsim/bb84.hpp"
#include "blindsim/scw.hpp"
#include "blindsim/simulation.hpp"

namespace blindsim {

enum class OutputFormat { text, csv, jsonl };

/// Parses "text", "csv" or "jsonl"; throws std::invalid_argument otherwise.
OutputFormat parse_output_format(std::string_view name);

/// 17 significant digits, the precision used by every machine format.
std::string format_double(double v);

std::string_view stats_csv_header();

/// Stable field order in every format. Undefined ratios print as NA in text,
/// an empty field in CSV and null in JSON lines.
std::string format_stats(const RunStats& stats, OutputFormat format);

std::string_view event_log_header();
std::string format_event(const GateRecord& record);

/// Budget rows at display precision: one decimal on the APD row, integers on
/// the two upstream rows.
std::string format_budget(const std::array<BudgetRow, 3>& rows, OutputFormat format);

std::string format_sweep(const std::vector<SweepPoint>& points, SweepVariable variable,
                         OutputFormat format);

}  // namespace blindsim
