#pragma once

#include <cstdint>

#include "critwin/rng.hpp"

namespace critwin {

/// Exact Binomial(trials, p) variate: inversion when trials*min(p,1-p) < 30,
/// otherwise the BTPE acceptance-rejection method. No normal approximation.
std::int64_t sample_binomial(RngStream& rng, std::int64_t trials, double p);

/// Number of failures before the first success of Bernoulli(p), p in (0, 1].
std::int64_t sample_geometric(RngStream& rng, double p);

}  // namespace critwin
