#include "critwin/csv.hpp"

#include <iterator>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace critwin {
namespace {

template <class... Args>
void line(std::ostream& os, fmt::format_string<Args...> format, Args&&... args) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), format, std::forward<Args>(args)...);
  buf.push_back('\n');
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace

void write_trace_csv(std::ostream& os, std::span<const std::int64_t> Z, std::span<const std::int64_t> C) {
  os << "h,Z,C\n";
  for (std::size_t h = 0; h < Z.size(); ++h) line(os, "{},{},{}", h, Z[h], C[h]);
}

void write_trace_csv(std::ostream& os, const EpidemicTrace& trace) {
  write_trace_csv(os, trace.Z, trace.C);
}

void write_cousin_csv(std::ostream& os, const CousinSeries& series) {
  os << "j,csn,K\n";
  for (std::size_t j = 0; j < series.K.size(); ++j) {
    line(os, "{},{},{}", j, j < series.csn.size() ? series.csn[j] : 0, series.K[j]);
  }
}

void write_walk_csv(std::ostream& os, const WalkPath& walk) {
  os << "i,X\n";
  for (std::size_t i = 0; i < walk.X.size(); ++i) line(os, "{},{}", i, walk.X[i]);
}

void write_path_csv(std::ostream& os, const SdePath& path) {
  os << "t,Z,C\n";
  for (std::size_t i = 0; i < path.Z.size(); ++i) {
    line(os, "{:.17g},{:.17g},{:.17g}", path.time_of(i), path.Z[i], path.C[i]);
  }
}

void write_parabolic_csv(std::ostream& os, const ParabolicBMPath& path) {
  os << "t,X\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    line(os, "{:.17g},{:.17g}", static_cast<double>(i) * path.dt, path.values[i]);
  }
}

void write_deterministic_csv(std::ostream& os, double x, double lambda, double dt, double t_max) {
  os << "t,f,c,z,K\n";
  const std::int64_t steps = step_count(dt, t_max);
  for (std::int64_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const auto v = eval_deterministic(x, lambda, t);
    line(os, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}", t, v.f, v.c, v.z, v.K);
  }
}

void write_hitting_csv(std::ostream& os, std::span<const HittingSample> samples) {
  os << "replicate,T,truncated\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    line(os, "{},{:.17g},{}", i, samples[i].T, samples[i].truncated ? 1 : 0);
  }
}

void write_sweep_csv(std::ostream& os, const BoundSweep& sweep) {
  os << "n,quantity,sup_value\n";
  for (const auto& row : sweep.rows) {
    line(os, "{},{},{:.17g}", row.n, to_string(row.quantity), row.sup_value);
  }
}

}  // namespace critwin
