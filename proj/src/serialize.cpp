#include "aisr/serialize.hpp"

#include <stdexcept>
#include <string>

namespace aisr {

namespace {

template <typename T>
T required(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument(std::string("bad type for field '") + key + "'");
    }
}

std::int64_t required_count(const nlohmann::json& j, const char* key) {
    const auto v = required<std::int64_t>(j, key);
    if (v < 0) throw std::invalid_argument(std::string("negative count in field '") + key + "'");
    return v;
}

} // namespace

nlohmann::ordered_json to_json(const Situation& s) {
    return {{"s", s.s}, {"e", s.e}, {"i", s.i}, {"ii", s.ii}, {"r", s.r},
            {"im", s.im}, {"d", s.d}, {"tick", s.tick}};
}

nlohmann::ordered_json to_json(const Action& a) {
    return {{"type", std::string(to_string(a.type))},
            {"amount", a.amount},
            {"cost", a.cost},
            {"from", a.from_day},
            {"to", a.to_day},
            {"efficacy", a.efficacy}};
}

nlohmann::ordered_json to_json(const Plan& p) {
    nlohmann::ordered_json tasks = nlohmann::ordered_json::array();
    for (const auto& t : p.tasks) tasks.push_back(to_json(t));
    return {{"id", p.id}, {"certainty", p.certainty}, {"tasks", std::move(tasks)}};
}

Situation situation_from_json(const nlohmann::json& j) {
    Situation s;
    s.s = required_count(j, "s");
    s.e = required_count(j, "e");
    s.i = required_count(j, "i");
    s.ii = required_count(j, "ii");
    s.r = required_count(j, "r");
    s.im = required_count(j, "im");
    s.d = required_count(j, "d");
    if (j.contains("tick")) s.tick = required_count(j, "tick");
    return s;
}

Action action_from_json(const nlohmann::json& j) {
    Action a;
    const auto name = required<std::string>(j, "type");
    const auto type = parse_action_type(name);
    if (!type) throw std::invalid_argument("unknown action type '" + name + "'");
    a.type = *type;
    a.amount = required_count(j, "amount");
    a.cost = required<double>(j, "cost");
    a.from_day = required_count(j, "from");
    a.to_day = required_count(j, "to");
    a.efficacy = required<double>(j, "efficacy");
    if (a.to_day < a.from_day) throw std::invalid_argument("field 'to' precedes 'from'");
    if (!(a.cost >= 0.0)) throw std::invalid_argument("negative value in field 'cost'");
    if (!(a.efficacy >= 0.0 && a.efficacy <= 1.0))
        throw std::invalid_argument("field 'efficacy' outside [0,1]");
    return a;
}

Plan plan_from_json(const nlohmann::json& j) {
    Plan p;
    p.id = required<std::int64_t>(j, "id");
    p.certainty = required<double>(j, "certainty");
    if (!(p.certainty >= 0.0 && p.certainty <= 1.0))
        throw std::invalid_argument("field 'certainty' outside [0,1]");
    if (!j.contains("tasks") || !j.at("tasks").is_array()) throw std::invalid_argument("missing field 'tasks'");
    for (const auto& t : j.at("tasks")) p.tasks.push_back(action_from_json(t));
    return p;
}

} // namespace aisr
