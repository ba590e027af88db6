#include "beamplan/blockage.hpp"

#include <cmath>

namespace beamplan {

double steady_state(const BlockageChain& chain) {
    double denom = chain.p10 + chain.p01;
    if (denom <= 0.0)
        throw ValidationError("blockage chain with p10 = p01 = 0 has no unique stationary distribution");
    return chain.p10 / denom;
}

BlockageMatrix two_state_power(const BlockageChain& chain, long t) {
    double denom = chain.p10 + chain.p01;
    if (denom <= 0.0) {
        // frozen chain: identity at every horizon
        return {{{1.0, 0.0}, {0.0, 1.0}}};
    }
    double pi0 = chain.p10 / denom;  // stationary blocked mass
    double pi1 = chain.p01 / denom;
    double mu = std::pow(1.0 - denom, static_cast<double>(t));
    BlockageMatrix m;
    m[0][0] = pi0 + pi1 * mu;
    m[0][1] = pi1 - pi1 * mu;
    m[1][0] = pi0 - pi0 * mu;
    m[1][1] = pi1 + pi0 * mu;
    return m;
}

int sample_step(const BlockageChain& chain, int b, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    if (b == 0) return u < chain.p01 ? 1 : 0;
    return u < chain.p10 ? 0 : 1;
}

}  // namespace beamplan
