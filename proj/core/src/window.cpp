#include "critwin/window.hpp"

#include <cmath>

#include <fmt/format.h>

#include "critwin/error.hpp"

namespace critwin {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

double edge_probability(const CriticalWindow& window, std::int64_t n) {
  if (n < 2) {
    throw InvalidWindowError(fmt::format("invalid window: n = {} (need n >= 2) for {}", n,
                                         describe(window)));
  }
  const auto nd = static_cast<double>(n);
  const double p = std::visit(
      Overloaded{
          [&](const AldousWindow& w) { return 1.0 / nd + w.lambda * std::pow(nd, -4.0 / 3.0); },
          [&](const GeneralWindow& w) {
            if (!(w.epsilon > 0.0)) {
              throw InvalidWindowError(fmt::format(
                  "invalid window: epsilon must be positive (n = {}, lambda = {}, epsilon = {})", n,
                  w.lambda, w.epsilon));
            }
            return (1.0 + w.lambda * w.epsilon) / nd;
          },
      },
      window);
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidWindowError(
        fmt::format("invalid window: p = {} outside (0, 1) for n = {}, {}", p, n, describe(window)));
  }
  return p;
}

double window_lambda(const CriticalWindow& window) {
  return std::visit([](const auto& w) { return w.lambda; }, window);
}

std::optional<double> window_epsilon(const CriticalWindow& window) {
  if (const auto* g = std::get_if<GeneralWindow>(&window)) return g->epsilon;
  return std::nullopt;
}

bool is_general(const CriticalWindow& window) {
  return std::holds_alternative<GeneralWindow>(window);
}

double window_theta(const CriticalWindow& window, std::int64_t n) {
  if (const auto* g = std::get_if<GeneralWindow>(&window)) {
    return g->epsilon * std::cbrt(static_cast<double>(n));
  }
  return 1.0;
}

bool regime_condition_met(const CriticalWindow& window, std::int64_t n, double threshold) {
  if (const auto* g = std::get_if<GeneralWindow>(&window)) {
    return g->epsilon * g->epsilon * g->epsilon * static_cast<double>(n) > threshold;
  }
  return true;
}

std::string describe(const CriticalWindow& window) {
  return std::visit(
      Overloaded{
          [](const AldousWindow& w) { return fmt::format("aldous window (lambda = {})", w.lambda); },
          [](const GeneralWindow& w) {
            return fmt::format("general window (lambda = {}, epsilon = {})", w.lambda, w.epsilon);
          },
      },
      window);
}

}  // namespace critwin
