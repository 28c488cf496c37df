#pragma once

// Reference implementations the suites compare the library against. Each is
// written directly from first principles, independently of the code under
// test: a boolean trace checker, tabular value iteration, breadth-first grid
// distances, and generators for random formulas and trajectories.

#include <cstdint>
#include <deque>
#include <random>
#include <utility>
#include <vector>

#include "hstl/formula.hpp"
#include "hstl/rng.hpp"

namespace oracle {

inline hstl::Rational pred_value(const hstl::State& s, const hstl::Predicate& p) {
  hstl::Rational v(0);
  for (const hstl::Term& term : p.terms)
    v += term.coeff * hstl::Rational(s[static_cast<std::size_t>(term.var_index)]);
  return v;
}

// Boolean satisfaction with strict inequalities, evaluated literally from
// the operator definitions. Assumes the formula's needs fit inside
// [0, traj.size()), which the generators below guarantee.
inline bool sat(const hstl::Trajectory& traj, const hstl::StlFormula& f, int t) {
  using K = hstl::NodeKind;
  switch (f.kind()) {
    case K::Pred: {
      const hstl::Rational v = pred_value(traj[static_cast<std::size_t>(t)], f.pred());
      return f.pred().cmp == hstl::Comparator::Less ? v < f.pred().constant
                                                    : v > f.pred().constant;
    }
    case K::Not:
      return !sat(traj, *f.left(), t);
    case K::And:
      return sat(traj, *f.left(), t) && sat(traj, *f.right(), t);
    case K::Or:
      return sat(traj, *f.left(), t) || sat(traj, *f.right(), t);
    case K::Always: {
      for (int u = t + f.window().lo; u < t + f.window().hi; ++u)
        if (!sat(traj, *f.left(), u)) return false;
      return true;
    }
    case K::Eventually: {
      for (int u = t + f.window().lo; u < t + f.window().hi; ++u)
        if (sat(traj, *f.left(), u)) return true;
      return false;
    }
    case K::Until: {
      for (int u = t + f.window().lo; u < t + f.window().hi; ++u) {
        if (!sat(traj, *f.right(), u)) continue;
        bool held = true;
        for (int v = t; v < u; ++v)
          if (!sat(traj, *f.left(), v)) {
            held = false;
            break;
          }
        if (held) return true;
      }
      return false;
    }
  }
  return false;
}

// --- tabular value iteration -----------------------------------------------

struct Transition {
  std::size_t next = 0;
  double prob = 0.0;
  double reward = 0.0;
};

struct TabularModel {
  std::size_t states = 0;
  std::size_t actions = 0;
  std::vector<std::vector<std::vector<Transition>>> trans;  // [state][action]
};

inline std::vector<double> q_star(const TabularModel& m, double gamma, int sweeps) {
  std::vector<double> q(m.states * m.actions, 0.0);
  std::vector<double> next(q.size(), 0.0);
  for (int it = 0; it < sweeps; ++it) {
    for (std::size_t s = 0; s < m.states; ++s)
      for (std::size_t a = 0; a < m.actions; ++a) {
        double acc = 0.0;
        for (const Transition& tr : m.trans[s][a]) {
          double best = q[tr.next * m.actions];
          for (std::size_t b = 1; b < m.actions; ++b)
            best = std::max(best, q[tr.next * m.actions + b]);
          acc += tr.prob * (tr.reward + gamma * best);
        }
        next[s * m.actions + a] = acc;
      }
    q.swap(next);
  }
  return q;
}

// Grid dynamics written out independently: intended move with probability
// intent, each of the other three with probability slip, moves off the edge
// stay put. Rewards are the goal predicate's robustness at the landing state.
inline TabularModel grid_model(int w, int h, double intent, double slip,
                               const hstl::Predicate& goal) {
  static const int dx[4] = {0, 0, -1, 1};
  static const int dy[4] = {1, -1, 0, 0};
  TabularModel m;
  m.states = static_cast<std::size_t>(w * h);
  m.actions = 4;
  m.trans.assign(m.states, std::vector<std::vector<Transition>>(4));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t s = static_cast<std::size_t>(y * w + x);
      for (int a = 0; a < 4; ++a)
        for (int realized = 0; realized < 4; ++realized) {
          const double p = realized == a ? intent : slip;
          if (p == 0.0) continue;
          int nx = x + dx[realized];
          int ny = y + dy[realized];
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) {
            nx = x;
            ny = y;
          }
          const std::size_t s2 = static_cast<std::size_t>(ny * w + nx);
          const double r = hstl::to_double(
              (goal.cmp == hstl::Comparator::Less ? goal.constant - pred_value(hstl::State{nx, ny}, goal)
                                                  : pred_value(hstl::State{nx, ny}, goal) - goal.constant));
          m.trans[s][static_cast<std::size_t>(a)].push_back(Transition{s2, p, r});
        }
    }
  return m;
}

// --- breadth-first distances on the grid ------------------------------------

inline std::vector<int> grid_distances(int w, int h,
                                       const std::vector<std::pair<int, int>>& goals) {
  std::vector<int> dist(static_cast<std::size_t>(w * h), -1);
  std::deque<std::pair<int, int>> frontier;
  for (const auto& [x, y] : goals) {
    dist[static_cast<std::size_t>(y * w + x)] = 0;
    frontier.emplace_back(x, y);
  }
  static const int dx[4] = {0, 0, -1, 1};
  static const int dy[4] = {1, -1, 0, 0};
  while (!frontier.empty()) {
    const auto [x, y] = frontier.front();
    frontier.pop_front();
    for (int a = 0; a < 4; ++a) {
      const int nx = x + dx[a];
      const int ny = y + dy[a];
      if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
      const std::size_t n = static_cast<std::size_t>(ny * w + nx);
      if (dist[n] >= 0) continue;
      dist[n] = dist[static_cast<std::size_t>(y * w + x)] + 1;
      frontier.emplace_back(nx, ny);
    }
  }
  return dist;
}

// --- random inputs -----------------------------------------------------------

inline hstl::Predicate random_predicate(std::mt19937_64& g) {
  hstl::Predicate p;
  const std::size_t nterms = 1 + hstl::uniform_index(g, 2);
  for (std::size_t i = 0; i < nterms; ++i) {
    hstl::Term t;
    const int v = static_cast<int>(hstl::uniform_index(g, 2));
    t.var = v == 0 ? "x" : "y";
    t.var_index = v;
    switch (hstl::uniform_index(g, 4)) {
      case 0: t.coeff = hstl::Rational(-1); break;
      case 1: t.coeff = hstl::Rational(1); break;
      case 2: t.coeff = hstl::Rational(1, 2); break;
      default: t.coeff = hstl::Rational(2); break;
    }
    p.terms.push_back(std::move(t));
  }
  p.cmp = hstl::uniform_index(g, 2) == 0 ? hstl::Comparator::Less : hstl::Comparator::Greater;
  p.constant = hstl::Rational(static_cast<long long>(hstl::uniform_index(g, 61)) - 20, 2);
  return p;
}

// Bounded-window formula of the given depth; horizons stay modest so the
// soundness sweep can size trajectories to fit.
inline hstl::FormulaPtr random_formula(std::mt19937_64& g, int depth) {
  using hstl::StlFormula;
  if (depth <= 0 || hstl::uniform_index(g, 4) == 0)
    return StlFormula::predicate(random_predicate(g));
  const int lo = static_cast<int>(hstl::uniform_index(g, 3));
  const int hi = lo + 1 + static_cast<int>(hstl::uniform_index(g, 4));
  const hstl::Window w = hstl::Window::bounded(lo, hi);
  switch (hstl::uniform_index(g, 6)) {
    case 0: return StlFormula::negation(random_formula(g, depth - 1));
    case 1:
      return StlFormula::conjunction(random_formula(g, depth - 1), random_formula(g, depth - 1));
    case 2:
      return StlFormula::disjunction(random_formula(g, depth - 1), random_formula(g, depth - 1));
    case 3: return StlFormula::always(w, random_formula(g, depth - 1));
    case 4: return StlFormula::eventually(w, random_formula(g, depth - 1));
    default:
      return StlFormula::until(w, random_formula(g, depth - 1), random_formula(g, depth - 1));
  }
}

inline hstl::Trajectory random_trajectory(std::mt19937_64& g, int len, int w, int h) {
  hstl::Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i)
    traj.states.push_back(hstl::State{static_cast<int>(hstl::uniform_index(g, static_cast<std::uint64_t>(w))),
                                      static_cast<int>(hstl::uniform_index(g, static_cast<std::uint64_t>(h)))});
  return traj;
}

}  // namespace oracle
