#pragma once

#include <array>
#include <random>

#include "beamplan/config.hpp"

namespace beamplan {

/// Two-state LOS/blockage chain. State 1 = LOS, state 0 = blocked.
struct BlockageChain {
    double p10 = 0;  // P(LOS -> blocked) per slot
    double p01 = 0;  // P(blocked -> LOS) per slot
};

/// 2x2 matrix indexed [from][to] over states {0, 1}.
using BlockageMatrix = std::array<std::array<double, 2>, 2>;

/// Long-run probability of being blocked.
double steady_state(const BlockageChain& chain);

/// t-step transition matrix in closed form (second eigenvalue (1-p10-p01)^t).
BlockageMatrix two_state_power(const BlockageChain& chain, long t);

int sample_step(const BlockageChain& chain, int b, std::mt19937_64& rng);

}  // namespace beamplan
