#include "aisr/round_log.hpp"

#include "aisr/errors.hpp"
#include "aisr/serialize.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <string>

namespace aisr {

namespace {

constexpr std::array<std::string_view, 9> kStateNames = {
    "Monitoring", "Detected", "Matched", "MatchFailed", "HelpRequested",
    "Mutating",   "Cloning",  "Retained", "Ignored",
};

constexpr std::array<std::string_view, 9> kEventNames = {
    "no_change",          "nonself_detected", "memory_match",    "memory_miss", "plan_found",
    "plan_deployed",      "response_succeeded", "response_failed", "proceed",
};

template <typename... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

nlohmann::ordered_json details_json(const Message& m) {
    nlohmann::ordered_json j = std::visit(
        overloaded{
            [](const SituationReport& p) {
                return nlohmann::ordered_json{{"kind", "SituationReport"},
                                              {"report_id", p.report_id},
                                              {"situation", to_json(p.situation)}};
            },
            [](const AggregatedReport& p) {
                return nlohmann::ordered_json{{"kind", "AggregatedReport"},
                                              {"situation_id", p.situation_id},
                                              {"reference_report_id", p.reference_report_id},
                                              {"report_ids", p.report_ids},
                                              {"situation", to_json(p.situation)}};
            },
            [](const PlanMsg& p) {
                nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
                for (const auto& t : p.tasks) tasks.push_back(to_json(t));
                nlohmann::ordered_json j{{"kind", "PlanMsg"},
                                         {"plan_id", p.plan_id},
                                         {"situation_id", p.situation_id},
                                         {"certainty", p.certainty},
                                         {"source", p.source}};
                if (p.case_id) j["case_id"] = *p.case_id;
                j["total_cost"] = Plan{p.plan_id, p.certainty, p.tasks}.total_cost();
                j["tasks"] = std::move(tasks);
                return j;
            },
            [](const TaskAssignment& p) {
                return nlohmann::ordered_json{{"kind", "TaskAssignment"},
                                              {"plan_id", p.plan_id},
                                              {"task_index", p.task_index},
                                              {"tactical_agent", p.tactical_agent},
                                              {"task", to_json(p.task)}};
            },
            [](const TaskDeployment& p) {
                return nlohmann::ordered_json{{"kind", "TaskDeployment"},
                                              {"plan_id", p.plan_id},
                                              {"task_index", p.task_index},
                                              {"task", to_json(p.task)}};
            },
            [](const TaskStatus& p) {
                return nlohmann::ordered_json{{"kind", "TaskStatus"},
                                              {"plan_id", p.plan_id},
                                              {"task_index", p.task_index},
                                              {"status", p.ok ? "ok" : "failed"}};
            },
            [](const PlanStatus& p) {
                return nlohmann::ordered_json{{"kind", "PlanStatus"},
                                              {"plan_id", p.plan_id},
                                              {"status", p.ok ? "ok" : "failed"},
                                              {"successfulness", p.successfulness}};
            },
        },
        m.payload);
    if (!m.transitions.empty()) {
        auto& arr = j["transitions"] = nlohmann::ordered_json::array();
        for (const auto& t : m.transitions)
            arr.push_back({{"from", to_string(t.from)}, {"event", to_string(t.event)}, {"to", to_string(t.to)}});
    }
    return j;
}

std::int64_t parse_int(std::string_view field, std::size_t line_no, const char* what) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw FormatError(line_no, std::string("bad ") + what + " column");
    return v;
}

} // namespace

std::string_view to_string(AgentRole role) {
    switch (role) {
    case AgentRole::Operational: return "Operational";
    case AgentRole::Tactical: return "Tactical";
    case AgentRole::TacticalCommunication: return "TacticalCommunication";
    case AgentRole::DecisionMaking: return "DecisionMaking";
    }
    return "?";
}

int role_priority(AgentRole role) {
    switch (role) {
    case AgentRole::Operational: return 0;
    case AgentRole::TacticalCommunication: return 1;
    case AgentRole::DecisionMaking: return 2;
    case AgentRole::Tactical: return 3;
    }
    return 4;
}

std::string agent_name(AgentRole role, std::int64_t index, std::string_view eoc) {
    const std::string n = std::to_string(index);
    const std::string suffix = "_" + std::string(eoc);
    switch (role) {
    case AgentRole::Operational: return "Operational_" + n + suffix;
    case AgentRole::Tactical: return "Tactical_" + n + suffix;
    case AgentRole::TacticalCommunication: return "TacticalCommunication" + n + suffix;
    case AgentRole::DecisionMaking: return "CrisisManager" + n + suffix;
    }
    return "?";
}

std::string_view to_string(ControlLoopState state) { return kStateNames[static_cast<std::size_t>(state)]; }
std::string_view to_string(ControlEvent event) { return kEventNames[static_cast<std::size_t>(event)]; }

std::optional<ControlLoopState> parse_control_state(std::string_view name) {
    for (std::size_t k = 0; k < kStateNames.size(); ++k)
        if (kStateNames[k] == name) return static_cast<ControlLoopState>(k);
    return std::nullopt;
}

std::optional<ControlEvent> parse_control_event(std::string_view name) {
    for (std::size_t k = 0; k < kEventNames.size(); ++k)
        if (kEventNames[k] == name) return static_cast<ControlEvent>(k);
    return std::nullopt;
}

IllegalTransition::IllegalTransition(ControlLoopState state, ControlEvent event)
    : std::logic_error("illegal control-loop transition: " + std::string(to_string(state)) + " on " +
                       std::string(to_string(event))) {}

ControlLoopState control_step(ControlLoopState state, ControlEvent event) {
    using S = ControlLoopState;
    using E = ControlEvent;
    switch (state) {
    case S::Monitoring:
        if (event == E::NoChange) return S::Monitoring;
        if (event == E::NonselfDetected) return S::Detected;
        break;
    case S::Detected:
        if (event == E::MemoryMatch) return S::Matched;
        if (event == E::MemoryMiss) return S::MatchFailed;
        break;
    case S::MatchFailed:
        if (event == E::Proceed) return S::HelpRequested;
        break;
    case S::HelpRequested:
        if (event == E::Proceed) return S::Mutating;
        break;
    case S::Matched:
    case S::Mutating:
        if (event == E::PlanFound) return S::Cloning;
        break;
    case S::Cloning:
        if (event == E::PlanDeployed) return S::Cloning;
        if (event == E::ResponseSucceeded) return S::Retained;
        if (event == E::ResponseFailed) return S::Ignored;
        break;
    case S::Retained:
        if (event == E::Proceed) return S::Monitoring;
        break;
    case S::Ignored:
        if (event == E::Proceed) return S::Mutating;
        break;
    }
    throw IllegalTransition(state, event);
}

std::string_view action_description(const Payload& payload) {
    return std::visit(overloaded{
                          [](const SituationReport&) { return "Reporting disease spread situation"; },
                          [](const AggregatedReport&) { return "Reporting disease and resources situation"; },
                          [](const PlanMsg&) { return "Distributing plan for execution"; },
                          [](const TaskAssignment&) { return "Allocating tasks to tactical agents"; },
                          [](const TaskDeployment&) { return "Deploying plan task"; },
                          [](const TaskStatus&) { return "Reporting task execution status"; },
                          [](const PlanStatus&) { return "Reporting plan execution status"; },
                      },
                      payload);
}

void RoundLog::append(Message message) {
    if (message.hour < 0 || message.hour > 22 || message.hour % 2 != 0)
        throw std::invalid_argument("log message hour must be even and within 0..22");
    if (!messages_.empty()) {
        const auto& last = messages_.back();
        if (message.day < last.day || (message.day == last.day && message.hour < last.hour))
            throw std::invalid_argument("log message timestamp goes backwards");
    }
    messages_.push_back(std::move(message));
}

void RoundLog::write(std::ostream& out) const {
    out << kLogHeader << '\n';
    for (const auto& m : messages_) {
        out << m.agent << '\t' << eoc_ << '\t' << action_description(m.payload) << '\t' << m.day << '\t'
            << m.hour << '\t' << details_json(m).dump() << '\n';
    }
}

std::vector<LogRecord> read_log(std::istream& in) {
    std::vector<LogRecord> out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != kLogHeader) throw FormatError(1, "missing log header");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::array<std::string_view, 6> cols;
        std::string_view rest(line);
        for (std::size_t k = 0; k < 5; ++k) {
            const auto tab = rest.find('\t');
            if (tab == std::string_view::npos) throw FormatError(line_no, "expected 6 tab-separated columns");
            cols[k] = rest.substr(0, tab);
            rest.remove_prefix(tab + 1);
        }
        cols[5] = rest;
        LogRecord r;
        r.agent = cols[0];
        r.eoc = cols[1];
        r.action_description = cols[2];
        r.day = parse_int(cols[3], line_no, "day");
        r.hour = parse_int(cols[4], line_no, "hour");
        try {
            r.details = nlohmann::json::parse(cols[5]);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(line_no, std::string("bad details JSON: ") + e.what());
        }
        if (!r.details.is_object() || !r.details.contains("kind"))
            throw FormatError(line_no, "details lack a 'kind' field");
        out.push_back(std::move(r));
    }
    return out;
}

std::string check_log(const std::vector<LogRecord>& records) {
    std::set<std::int64_t> reports, situations, plans;
    ControlLoopState state = ControlLoopState::Monitoring;
    std::int64_t last_day = 0, last_hour = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        const std::string where = "record " + std::to_string(k) + ": ";
        if (r.hour < 0 || r.hour > 22 || r.hour % 2 != 0) return where + "hour is not on the 2-hour clock";
        if (r.day < last_day || (r.day == last_day && r.hour < last_hour)) return where + "timestamp goes backwards";
        last_day = r.day;
        last_hour = r.hour;

        const auto& d = r.details;
        const auto kind = d.value("kind", std::string{});
        try {
            if (kind == "SituationReport") {
                reports.insert(d.at("report_id").get<std::int64_t>());
            } else if (kind == "AggregatedReport") {
                if (!reports.count(d.at("reference_report_id").get<std::int64_t>()))
                    return where + "aggregated report references an unknown report";
                for (const auto& id : d.at("report_ids"))
                    if (!reports.count(id.get<std::int64_t>()))
                        return where + "aggregated report lists an unknown report";
                situations.insert(d.at("situation_id").get<std::int64_t>());
            } else if (kind == "PlanMsg") {
                if (!situations.count(d.at("situation_id").get<std::int64_t>()))
                    return where + "plan references an unknown situation";
                plans.insert(d.at("plan_id").get<std::int64_t>());
            } else if (kind == "TaskAssignment" || kind == "TaskDeployment" || kind == "TaskStatus" ||
                       kind == "PlanStatus") {
                if (!plans.count(d.at("plan_id").get<std::int64_t>())) return where + kind + " references an unknown plan";
            } else {
                return where + "unknown message kind '" + kind + "'";
            }
            if (d.contains("transitions")) {
                for (const auto& t : d.at("transitions")) {
                    const auto from = parse_control_state(t.at("from").get<std::string>());
                    const auto event = parse_control_event(t.at("event").get<std::string>());
                    const auto to = parse_control_state(t.at("to").get<std::string>());
                    if (!from || !event || !to) return where + "unknown control state or event";
                    if (*from != state) return where + "transition does not start at the current state";
                    if (control_step(*from, *event) != *to) return where + "transition target disagrees with control_step";
                    state = *to;
                }
            }
        } catch (const IllegalTransition& e) {
            return where + e.what();
        } catch (const nlohmann::json::exception& e) {
            return where + "malformed details: " + e.what();
        }
    }
    return {};
}

} // namespace aisr
