#pragma once

#include "lobhawkes/model.hpp"

#include <cstdint>

namespace lobhawkes {

struct SimConfig {
    double horizon{0.0};
    std::uint64_t seed{42};
    std::size_t max_events{1'000'000};
    // Permits simulating a non-stationary model (subcritical-horizon
    // experiments); the run is still capped by max_events.
    bool allow_nonstationary{false};
};

struct SimResult {
    EventStream stream;
    bool truncated{false}; // max_events reached before the horizon
};

// Thinning simulation. At the current time the total intensity bounds
// itself until the next event because both kernel families are
// non-increasing; candidates are drawn from that bound and accepted with
// ratio lambda(candidate)/bound, the bound re-tightened after every
// rejection. Bit-reproducible from the seed (xoshiro256++, see rng.hpp).
[[nodiscard]] SimResult simulate(const HawkesModel& model, const SimConfig& cfg);

// Stationary event rates r solving (I - K) r = mu with K the branching
// matrix. Throws on a supercritical or singular system.
[[nodiscard]] std::array<double, 2> expected_rates(const HawkesModel& model);

} // namespace lobhawkes
