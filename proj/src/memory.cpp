#include "aisr/memory.hpp"

#include "aisr/errors.hpp"
#include "aisr/serialize.hpp"

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace aisr {

std::int64_t MemoryStore::store(double successfulness, const Situation& situation, const Plan& plan) {
    if (!(successfulness >= 0.0 && successfulness <= 1.0))
        throw std::invalid_argument("successfulness outside [0,1]");
    const std::int64_t id = next_id_++;
    cases_.push_back({id, successfulness, situation, plan});
    return id;
}

std::optional<Retrieval> MemoryStore::retrieve_nearest(const Situation& query) const {
    std::optional<Retrieval> best;
    for (const auto& c : cases_) {
        if (c.successfulness < settings_.min_successfulness) continue;
        const auto dist = distance(query, c.situation);
        if (!best) {
            best = Retrieval{&c, dist};
            continue;
        }
        const auto& incumbent = *best->match;
        const bool closer = dist < best->distance;
        const bool tie = dist == best->distance;
        if (closer || (tie && (c.successfulness > incumbent.successfulness ||
                               (c.successfulness == incumbent.successfulness && c.id < incumbent.id)))) {
            best = Retrieval{&c, dist};
        }
    }
    return best;
}

void MemoryStore::save(std::ostream& out) const {
    for (const auto& c : cases_) {
        nlohmann::ordered_json j = {{"id", c.id},
                                    {"successfulness", c.successfulness},
                                    {"situation", to_json(c.situation)},
                                    {"plan", to_json(c.plan)}};
        out << j.dump() << '\n';
    }
}

void MemoryStore::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open memory file for writing: " + path.string());
    save(out);
    if (!out) throw IoError("failed writing memory file: " + path.string());
}

MemoryStore MemoryStore::load(std::istream& in, const MemorySettings& settings) {
    MemoryStore store(settings);
    std::set<std::int64_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            MemoryCase c;
            if (!j.is_object() || !j.contains("id") || !j.at("id").is_number_integer())
                throw std::invalid_argument("missing integer field 'id'");
            c.id = j.at("id").get<std::int64_t>();
            if (c.id < 0) throw std::invalid_argument("negative case id");
            if (!seen.insert(c.id).second) throw std::invalid_argument("duplicate case id");
            if (!j.contains("successfulness") || !j.at("successfulness").is_number())
                throw std::invalid_argument("missing field 'successfulness'");
            c.successfulness = j.at("successfulness").get<double>();
            if (!(c.successfulness >= 0.0 && c.successfulness <= 1.0))
                throw std::invalid_argument("successfulness outside [0,1]");
            if (!j.contains("situation")) throw std::invalid_argument("missing field 'situation'");
            c.situation = situation_from_json(j.at("situation"));
            if (!j.contains("plan")) throw std::invalid_argument("missing field 'plan'");
            c.plan = plan_from_json(j.at("plan"));
            store.next_id_ = std::max(store.next_id_, c.id + 1);
            store.cases_.push_back(std::move(c));
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw FormatError(line_no, e.what());
        }
    }
    return store;
}

MemoryStore MemoryStore::load(const std::filesystem::path& path, const MemorySettings& settings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open memory file: " + path.string());
    return load(in, settings);
}

} // namespace aisr
