#pragma once

#include "aisr/plan.hpp"
#include "aisr/situation.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace aisr {

enum class AgentRole : std::uint8_t { Operational, Tactical, TacticalCommunication, DecisionMaking };

std::string_view to_string(AgentRole role);

/// Ordering of roles that act on the same tick.
int role_priority(AgentRole role);

/// Display name, e.g. "Operational_1_EOC1" or "CrisisManager0_EOC1".
std::string agent_name(AgentRole role, std::int64_t index, std::string_view eoc);

enum class ControlLoopState : std::uint8_t {
    Monitoring,     // no change in environment
    Detected,       // non-self situation reported
    Matched,        // memory holds a close enough case
    MatchFailed,    // nothing close enough in memory
    HelpRequested,  // tactical level escalates to the decision maker
    Mutating,       // clonal search for a new course of actions
    Cloning,        // plan allocated and deployed
    Retained,       // response kept as a memory case
    Ignored,        // response failed
};

enum class ControlEvent : std::uint8_t {
    NoChange,
    NonselfDetected,
    MemoryMatch,
    MemoryMiss,
    PlanFound,
    PlanDeployed,
    ResponseSucceeded,
    ResponseFailed,
    Proceed,  // unconditional follow-on edge
};

std::string_view to_string(ControlLoopState state);
std::string_view to_string(ControlEvent event);
std::optional<ControlLoopState> parse_control_state(std::string_view name);
std::optional<ControlEvent> parse_control_event(std::string_view name);

/// Thrown by control_step on an edge the loop does not have.
class IllegalTransition : public std::logic_error {
public:
    IllegalTransition(ControlLoopState state, ControlEvent event);
};

/// Edges:
///   Monitoring  --no_change-->          Monitoring
///   Monitoring  --nonself_detected-->   Detected
///   Detected    --memory_match-->       Matched
///   Detected    --memory_miss-->        MatchFailed
///   MatchFailed --proceed-->            HelpRequested
///   HelpRequested --proceed-->          Mutating
///   Matched     --plan_found-->         Cloning
///   Mutating    --plan_found-->         Cloning
///   Cloning     --plan_deployed-->      Cloning
///   Cloning     --response_succeeded--> Retained
///   Cloning     --response_failed-->    Ignored
///   Retained    --proceed-->            Monitoring
///   Ignored     --proceed-->            Mutating
ControlLoopState control_step(ControlLoopState state, ControlEvent event);

struct Transition {
    ControlLoopState from;
    ControlEvent event;
    ControlLoopState to;

    bool operator==(const Transition&) const = default;
};

// ---- messages ---------------------------------------------------------------

struct SituationReport {
    std::int64_t report_id = 0;
    Situation situation;
};

struct AggregatedReport {
    std::int64_t situation_id = 0;
    std::int64_t reference_report_id = 0;
    std::vector<std::int64_t> report_ids;
    Situation situation;
};

struct PlanMsg {
    std::int64_t plan_id = 0;
    std::int64_t situation_id = 0;
    double certainty = 0.0;
    std::string source;  // "memory" or "clonal_selection"
    std::optional<std::int64_t> case_id;
    std::vector<Action> tasks;
};

struct TaskAssignment {
    std::int64_t plan_id = 0;
    std::int64_t task_index = 0;
    Action task;
    std::string tactical_agent;
};

struct TaskDeployment {
    std::int64_t plan_id = 0;
    std::int64_t task_index = 0;
    Action task;
};

struct TaskStatus {
    std::int64_t plan_id = 0;
    std::int64_t task_index = 0;
    bool ok = true;
};

struct PlanStatus {
    std::int64_t plan_id = 0;
    bool ok = true;
    double successfulness = 0.0;
};

using Payload = std::variant<SituationReport, AggregatedReport, PlanMsg, TaskAssignment, TaskDeployment,
                             TaskStatus, PlanStatus>;

/// One log line. `transitions` records control-loop edges taken at this message.
struct Message {
    std::string agent;
    AgentRole role = AgentRole::Operational;
    std::int64_t day = 0;
    std::int64_t hour = 0;
    Payload payload;
    std::vector<Transition> transitions;
};

std::string_view action_description(const Payload& payload);

/// Append-only crisis response log. Text form is tab-separated with columns
/// agent, eoc, action_description, day, hour, details; details is a JSON
/// object holding the payload fields.
class RoundLog {
public:
    explicit RoundLog(std::string eoc = "EOC1") : eoc_(std::move(eoc)) {}

    /// Throws std::invalid_argument for odd hours or timestamps that go backwards.
    void append(Message message);

    const std::vector<Message>& messages() const { return messages_; }
    const std::string& eoc() const { return eoc_; }

    void write(std::ostream& out) const;

private:
    std::string eoc_;
    std::vector<Message> messages_;
};

inline constexpr std::string_view kLogHeader = "agent\teoc\taction_description\tday\thour\tdetails";

/// A parsed log line.
struct LogRecord {
    std::string agent;
    std::string eoc;
    std::string action_description;
    std::int64_t day = 0;
    std::int64_t hour = 0;
    nlohmann::json details;
};

/// Throws FormatError with the offending line number.
std::vector<LogRecord> read_log(std::istream& in);

/// Checks a parsed log on its own: timestamps non-decreasing with even
/// hours, aggregated reports and plans reference earlier ids, and the
/// recorded transitions chain through control_step starting at Monitoring.
/// Returns an empty string when the log is consistent, else a description of
/// the first problem.
std::string check_log(const std::vector<LogRecord>& records);

} // namespace aisr
