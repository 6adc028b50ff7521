#pragma once

#include <cstdint>

#include "critwin/chain.hpp"

namespace critwin::cli {

/// Height-profile law of the multi-source exploration obtained by summing
/// over every graph on n labelled vertices (weight p^e (1-p)^(N-e)) and every
/// k-subset of roots (uniform). Keys follow exact_profile_distribution:
/// Z(0), Z(1), ..., terminated by the first zero. Requires n <= 7.
ProfileDistribution enumerate_graph_profiles(std::int64_t n, std::int64_t k, double p);

/// Same enumeration, truncated to (Z(0), ..., Z(depth)) with absorbed
/// generations written as zero.
ProfileDistribution enumerate_graph_prefix(std::int64_t n, std::int64_t k, double p, std::int64_t depth);

/// Half the L1 distance between two discrete laws.
double total_variation(const ProfileDistribution& a, const ProfileDistribution& b);

}  // namespace critwin::cli
