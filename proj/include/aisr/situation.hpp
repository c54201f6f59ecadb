#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace aisr {

enum class HealthState : std::uint8_t {
    Susceptible = 0,
    InContact,
    Infectious,
    IsolatedInfected,
    Recovered,
    Immunized,
    Dead,
};

inline constexpr std::size_t kHealthStateCount = 7;

inline constexpr std::array<HealthState, kHealthStateCount> kAllHealthStates = {
    HealthState::Susceptible, HealthState::InContact, HealthState::Infectious,
    HealthState::IsolatedInfected, HealthState::Recovered, HealthState::Immunized,
    HealthState::Dead,
};

/// Column label used in traces and memory dumps: S E I II R IM D.
std::string_view short_name(HealthState state);

/// True for the edges S->E, S->IM, E->I, I->II, I->R, I->D, II->R, II->D.
bool is_legal_transition(HealthState from, HealthState to);

/// Census of the population over the seven health states at a clock tick.
/// A tick is two hours; tick = day * 12 + hour / 2.
struct Situation {
    std::int64_t s = 0;
    std::int64_t e = 0;
    std::int64_t i = 0;
    std::int64_t ii = 0;
    std::int64_t r = 0;
    std::int64_t im = 0;
    std::int64_t d = 0;
    std::int64_t tick = 0;

    std::int64_t& operator[](HealthState state);
    std::int64_t operator[](HealthState state) const;

    std::array<std::int64_t, kHealthStateCount> counts() const { return {s, e, i, ii, r, im, d}; }
    std::int64_t total() const { return s + e + i + ii + r + im + d; }
    std::int64_t infected() const { return i + ii; }
    std::int64_t active_infection() const { return e + i + ii; }

    bool operator==(const Situation&) const = default;
};

/// City-block distance over the seven counts. The tick is not compared.
std::int64_t distance(const Situation& a, const Situation& b);

struct SelfPolicy {
    std::int64_t nonself_infection_threshold = 1;

    bool operator==(const SelfPolicy&) const = default;
};

/// A situation is non-self when E + I + II reaches the policy threshold.
bool is_nonself(const Situation& situation, const SelfPolicy& policy = {});

} // namespace aisr
