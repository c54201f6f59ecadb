#pragma once

#include "aisr/epidemic.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace aisr {

inline constexpr const char* kSummaryCsvHeader =
    "round,peak_day,peak_prev,attack,deaths,cost,certainty,successfulness,stored_case_id";

/// Fixed-width table for the terminal.
void write_summary_table(std::ostream& out, std::span<const RoundSummary> summaries);

/// Reals are written in shortest round-trip form, so read_summary_csv gives
/// back identical summaries.
void write_summary_csv(std::ostream& out, std::span<const RoundSummary> summaries);
std::vector<RoundSummary> read_summary_csv(std::istream& in);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

} // namespace aisr
