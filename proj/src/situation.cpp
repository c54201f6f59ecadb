#include "aisr/situation.hpp"

#include <cstdlib>

namespace aisr {

std::string_view short_name(HealthState state) {
    switch (state) {
    case HealthState::Susceptible: return "S";
    case HealthState::InContact: return "E";
    case HealthState::Infectious: return "I";
    case HealthState::IsolatedInfected: return "II";
    case HealthState::Recovered: return "R";
    case HealthState::Immunized: return "IM";
    case HealthState::Dead: return "D";
    }
    return "?";
}

bool is_legal_transition(HealthState from, HealthState to) {
    using H = HealthState;
    switch (from) {
    case H::Susceptible: return to == H::InContact || to == H::Immunized;
    case H::InContact: return to == H::Infectious;
    case H::Infectious:
        return to == H::IsolatedInfected || to == H::Recovered || to == H::Dead;
    case H::IsolatedInfected: return to == H::Recovered || to == H::Dead;
    case H::Recovered:
    case H::Immunized:
    case H::Dead: return false;
    }
    return false;
}

std::int64_t& Situation::operator[](HealthState state) {
    switch (state) {
    case HealthState::Susceptible: return s;
    case HealthState::InContact: return e;
    case HealthState::Infectious: return i;
    case HealthState::IsolatedInfected: return ii;
    case HealthState::Recovered: return r;
    case HealthState::Immunized: return im;
    case HealthState::Dead: break;
    }
    return d;
}

std::int64_t Situation::operator[](HealthState state) const {
    return const_cast<Situation&>(*this)[state];
}

std::int64_t distance(const Situation& a, const Situation& b) {
    return std::llabs(a.s - b.s) + std::llabs(a.e - b.e) + std::llabs(a.i - b.i) +
           std::llabs(a.ii - b.ii) + std::llabs(a.r - b.r) + std::llabs(a.im - b.im) +
           std::llabs(a.d - b.d);
}

bool is_nonself(const Situation& situation, const SelfPolicy& policy) {
    return situation.active_infection() >= policy.nonself_infection_threshold;
}

} // namespace aisr
