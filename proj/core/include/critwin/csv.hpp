#pragma once

#include <ostream>
#include <span>

#include "critwin/chain.hpp"
#include "critwin/continuum.hpp"
#include "critwin/graph.hpp"
#include "critwin/moments.hpp"

namespace critwin {

// Plain CSV writers: '\n' line ends, reals at 17 significant digits,
// no locale-dependent formatting.

/// `h,Z,C`
void write_trace_csv(std::ostream& os, std::span<const std::int64_t> Z, std::span<const std::int64_t> C);
void write_trace_csv(std::ostream& os, const EpidemicTrace& trace);
/// `j,csn,K` for j = 0..A (csn is 0 on the final row, K = K(A)).
void write_cousin_csv(std::ostream& os, const CousinSeries& series);
/// `i,X`
void write_walk_csv(std::ostream& os, const WalkPath& walk);
/// `t,Z,C`
void write_path_csv(std::ostream& os, const SdePath& path);
/// `t,X`
void write_parabolic_csv(std::ostream& os, const ParabolicBMPath& path);
/// `t,f,c,z,K` on the grid i * dt <= t_max.
void write_deterministic_csv(std::ostream& os, double x, double lambda, double dt, double t_max);
/// `replicate,T,truncated`
void write_hitting_csv(std::ostream& os, std::span<const HittingSample> samples);
/// `n,quantity,sup_value`
void write_sweep_csv(std::ostream& os, const BoundSweep& sweep);

}  // namespace critwin
