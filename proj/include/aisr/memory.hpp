#pragma once

#include "aisr/config.hpp"
#include "aisr/plan.hpp"
#include "aisr/situation.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace aisr {

/// A retained response: the situation it answered, the plan deployed, and
/// how well that plan worked.
struct MemoryCase {
    std::int64_t id = 0;
    double successfulness = 0.0;
    Situation situation;
    Plan plan;

    bool operator==(const MemoryCase&) const = default;
};

struct Retrieval {
    const MemoryCase* match = nullptr;
    std::int64_t distance = 0;
};

/// Append-only case store. Low-successfulness cases are kept but skipped by
/// retrieve_nearest.
class MemoryStore {
public:
    MemoryStore() = default;
    explicit MemoryStore(const MemorySettings& settings) : settings_(settings) {}

    /// Appends a case and returns its id. Throws std::invalid_argument if
    /// successfulness is outside [0,1].
    std::int64_t store(double successfulness, const Situation& situation, const Plan& plan);

    /// Nearest eligible case by city-block distance. Ties go to the higher
    /// successfulness, then the lower id.
    std::optional<Retrieval> retrieve_nearest(const Situation& query) const;

    const std::vector<MemoryCase>& cases() const { return cases_; }
    std::size_t size() const { return cases_.size(); }
    bool empty() const { return cases_.empty(); }
    std::int64_t next_id() const { return next_id_; }
    const MemorySettings& settings() const { return settings_; }
    void set_settings(const MemorySettings& settings) { settings_ = settings; }

    bool operator==(const MemoryStore&) const = default;

    /// One JSON object per line, ids in storage order.
    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;

    /// Throws FormatError (with 1-based line) on malformed or invalid records.
    static MemoryStore load(std::istream& in, const MemorySettings& settings = {});
    static MemoryStore load(const std::filesystem::path& path, const MemorySettings& settings = {});

private:
    std::vector<MemoryCase> cases_;
    std::int64_t next_id_ = 0;
    MemorySettings settings_;
};

} // namespace aisr
