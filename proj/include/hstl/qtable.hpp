#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hstl {

// Dense state x action value table.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t states, std::size_t actions, double initial = 0.0)
      : states_(states), actions_(actions), values_(states * actions, initial) {
    if (states == 0 || actions == 0)
      throw std::invalid_argument("QTable dimensions must be positive");
  }

  std::size_t states() const { return states_; }
  std::size_t actions() const { return actions_; }

  double at(std::size_t s, std::size_t a) const { return values_[index(s, a)]; }
  double& at(std::size_t s, std::size_t a) { return values_[index(s, a)]; }

  double max_value(std::size_t s) const {
    double best = at(s, 0);
    for (std::size_t a = 1; a < actions_; ++a) best = std::max(best, at(s, a));
    return best;
  }

  // Lowest-index maximizing action; the deterministic tie-break used for
  // exports and greedy replay.
  std::size_t greedy_action(std::size_t s) const {
    std::size_t best = 0;
    for (std::size_t a = 1; a < actions_; ++a)
      if (at(s, a) > at(s, best)) best = a;
    return best;
  }

  const std::vector<double>& raw() const { return values_; }

 private:
  std::size_t index(std::size_t s, std::size_t a) const {
    if (s >= states_ || a >= actions_) throw std::out_of_range("QTable index");
    return s * actions_ + a;
  }

  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
};

}  // namespace hstl
