#include "aisr/report.hpp"

#include "aisr/errors.hpp"

#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace aisr {

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

void write_summary_table(std::ostream& out, std::span<const RoundSummary> summaries) {
    out << std::left << std::setw(6) << "round" << std::right << std::setw(9) << "peak_day" << std::setw(10)
        << "peak_prev" << std::setw(8) << "attack" << std::setw(7) << "deaths" << std::setw(11) << "cost"
        << std::setw(10) << "certainty" << std::setw(15) << "successfulness" << '\n';
    for (const auto& s : summaries) {
        out << std::left << std::setw(6) << s.round << std::right << std::setw(9) << s.peak_day << std::fixed
            << std::setprecision(3) << std::setw(10) << s.peak_prevalence << std::setw(8) << s.attack_fraction
            << std::setw(7) << s.deaths << std::setprecision(2) << std::setw(11) << s.total_cost
            << std::setprecision(4) << std::setw(10) << s.plan_certainty << std::setw(15)
            << s.realized_successfulness << '\n';
        out.unsetf(std::ios::fixed);
    }
}

void write_summary_csv(std::ostream& out, std::span<const RoundSummary> summaries) {
    out << kSummaryCsvHeader << '\n';
    for (const auto& s : summaries) {
        out << s.round << ',' << s.peak_day << ',' << format_real(s.peak_prevalence) << ','
            << format_real(s.attack_fraction) << ',' << s.deaths << ',' << format_real(s.total_cost) << ','
            << format_real(s.plan_certainty) << ',' << format_real(s.realized_successfulness) << ',';
        if (s.stored_case_id) out << *s.stored_case_id;
        out << '\n';
    }
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw FormatError(line_no, "bad summary field '" + std::string(field) + "'");
    return value;
}

} // namespace

std::vector<RoundSummary> read_summary_csv(std::istream& in) {
    std::vector<RoundSummary> out;
    std::string line;
    if (!std::getline(in, line) || line != kSummaryCsvHeader) throw FormatError(1, "unexpected summary header");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream row(line);
        std::string col;
        while (std::getline(row, col, ',')) cols.push_back(col);
        if (!line.empty() && line.back() == ',') cols.emplace_back();
        if (cols.size() != 9) throw FormatError(line_no, "expected 9 summary columns");
        RoundSummary s;
        s.round = parse_field<std::int64_t>(cols[0], line_no);
        s.peak_day = parse_field<std::int64_t>(cols[1], line_no);
        s.peak_prevalence = parse_field<double>(cols[2], line_no);
        s.attack_fraction = parse_field<double>(cols[3], line_no);
        s.deaths = parse_field<std::int64_t>(cols[4], line_no);
        s.total_cost = parse_field<double>(cols[5], line_no);
        s.plan_certainty = parse_field<double>(cols[6], line_no);
        s.realized_successfulness = parse_field<double>(cols[7], line_no);
        if (!cols[8].empty()) s.stored_case_id = parse_field<std::int64_t>(cols[8], line_no);
        out.push_back(s);
    }
    return out;
}

} // namespace aisr
