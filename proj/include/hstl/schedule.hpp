#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace hstl {

// What a schedule's tick counter counts.
enum class TickSource { PrimitiveSteps, OptionChoices };

// Linearly decaying exploration rate with a floor:
//   eps(t) = max(floor, eps0 - decay * t)
struct EpsilonSchedule {
  double eps0 = 1.0;
  double decay = 0.0;
  double floor = 0.1;
  TickSource source = TickSource::PrimitiveSteps;

  EpsilonSchedule() = default;
  EpsilonSchedule(double eps0_, double decay_, double floor_, TickSource source_)
      : eps0(eps0_), decay(decay_), floor(floor_), source(source_) {
    if (eps0 < 0.0 || eps0 > 1.0) throw std::invalid_argument("eps0 must lie in [0, 1]");
    if (floor < 0.0 || floor > eps0)
      throw std::invalid_argument("floor must lie in [0, eps0]");
    if (decay < 0.0) throw std::invalid_argument("decay must be non-negative");
  }

  double at(std::uint64_t tick) const {
    return std::max(floor, eps0 - decay * static_cast<double>(tick));
  }
};

}  // namespace hstl
