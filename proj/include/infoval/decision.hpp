#pragma once

#include "infoval/geometry.hpp"
#include "infoval/scalar.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace infoval {

template <typename S>
struct Action {
  std::string label;
  std::vector<S> payoffs;  // one entry per state
};

/// Finite decision problem: expected payoff of an action at belief mu is
/// payoffs.mu, and the value function is the max over actions.
template <typename S>
struct DecisionProblem {
  std::size_t num_states = 0;
  std::vector<Action<S>> actions;
};

template <typename S>
DecisionProblem<S> make_problem(std::size_t num_states,
                                std::vector<Action<S>> actions) {
  if (num_states == 0) throw input_error("problem must have at least one state");
  if (actions.empty()) throw input_error("problem must have at least one action");
  std::set<std::string> seen;
  for (const auto& a : actions) {
    if (a.label.empty()) throw input_error("action label must be nonempty");
    if (!seen.insert(a.label).second)
      throw input_error("duplicate action label: " + a.label);
    if (a.payoffs.size() != num_states)
      throw input_error("action " + a.label + " has wrong payoff dimension");
  }
  return DecisionProblem<S>{num_states, std::move(actions)};
}

template <typename S>
S value_at(const DecisionProblem<S>& problem, const std::vector<S>& mu) {
  if (mu.size() != problem.num_states)
    throw input_error("belief dimension mismatch");
  S best = dot(problem.actions.front().payoffs, mu);
  for (std::size_t i = 1; i < problem.actions.size(); ++i)
    best = std::max(best, dot(problem.actions[i].payoffs, mu));
  return best;
}

/// Labels of all actions within tie tolerance of the max at mu.
template <typename S>
std::vector<std::string> optimal_actions(const DecisionProblem<S>& problem,
                                         const std::vector<S>& mu) {
  const S best = value_at(problem, mu);
  const S tol = scalar_traits<S>::merge_tolerance;
  std::vector<std::string> out;
  for (const auto& a : problem.actions)
    if (dot(a.payoffs, mu) >= best - tol) out.push_back(a.label);
  return out;
}

/// Actions grouped by identical payoff vector, with a flag for whether the
/// shared vector is uniquely optimal somewhere (equivalently, whether its
/// cell in the subdivision is full-dimensional) and a witness belief when so.
template <typename S>
struct ActionGroup {
  std::vector<S> payoffs;
  std::vector<std::string> labels;  // in original action order
  bool undominated = false;
  std::vector<S> witness;  // belief where the vector strictly beats the rest
};

namespace decdetail {

template <typename S>
bool same_payoffs(const std::vector<S>& a, const std::vector<S>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (scalar_traits<S>::is_exact) {
      if (a[i] != b[i]) return false;
    } else {
      if (abs_value(a[i] - b[i]) > scalar_traits<S>::merge_tolerance)
        return false;
    }
  }
  return true;
}

}  // namespace decdetail

template <typename S>
std::vector<ActionGroup<S>> action_groups(const DecisionProblem<S>& problem) {
  const std::size_t n = problem.num_states;
  std::vector<ActionGroup<S>> groups;
  for (const auto& a : problem.actions) {
    bool merged = false;
    for (auto& g : groups)
      if (decdetail::same_payoffs(g.payoffs, a.payoffs)) {
        g.labels.push_back(a.label);
        merged = true;
        break;
      }
    if (!merged) groups.push_back(ActionGroup<S>{a.payoffs, {a.label}, false, {}});
  }
  const auto domain = Polytope<S>::simplex(n);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::vector<std::pair<std::vector<S>, S>> rows;
    std::vector<char> strict;
    for (std::size_t j = 0; j < groups.size(); ++j) {
      if (j == i) continue;
      std::vector<S> diff(n);
      for (std::size_t s = 0; s < n; ++s)
        diff[s] = groups[i].payoffs[s] - groups[j].payoffs[s];
      rows.emplace_back(std::move(diff), S{0});
      strict.push_back(1);
    }
    auto sf = strict_feasibility(rows, strict, domain);
    groups[i].undominated = sf.feasible;
    groups[i].witness = std::move(sf.witness);
  }
  return groups;
}

template <typename S>
std::vector<std::string> undominated_actions(const DecisionProblem<S>& problem) {
  std::vector<std::string> out;
  for (const auto& g : action_groups(problem))
    if (g.undominated)
      out.insert(out.end(), g.labels.begin(), g.labels.end());
  return out;
}

/// Maximal region where one payoff vector attains the value function.
template <typename S>
struct Cell {
  std::vector<std::string> labels;
  std::vector<S> payoffs;
  Polytope<S> region;
};

/// The regular polyhedral subdivision induced by the value function: one
/// full-dimensional cell per undominated payoff vector, cut against the
/// other undominated vectors only (dominated vectors never rise above the
/// max, so they cannot shrink any cell).
template <typename S>
struct Subdivision {
  std::size_t num_states = 0;
  std::vector<Cell<S>> cells;
};

template <typename S>
Subdivision<S> subdivision(const DecisionProblem<S>& problem) {
  const std::size_t n = problem.num_states;
  auto groups = action_groups(problem);
  std::vector<const ActionGroup<S>*> live;
  for (const auto& g : groups)
    if (g.undominated) live.push_back(&g);
  if (live.empty())
    throw numeric_error("no undominated payoff vector found");
  Subdivision<S> out;
  out.num_states = n;
  for (std::size_t i = 0; i < live.size(); ++i) {
    std::vector<Halfspace<S>> rows;
    for (std::size_t j = 0; j < live.size(); ++j) {
      if (j == i) continue;
      std::vector<S> normal(n);
      for (std::size_t s = 0; s < n; ++s)
        normal[s] = live[j]->payoffs[s] - live[i]->payoffs[s];
      rows.push_back(Halfspace<S>{std::move(normal), S{0}});
    }
    out.cells.push_back(
        Cell<S>{live[i]->labels, live[i]->payoffs, Polytope<S>(n, std::move(rows))});
  }
  return out;
}

/// Indices of the cells whose payoff vector attains the value at mu.  A
/// single index means the value function is locally a single affine piece
/// (mu lies in that cell's interior relative to the subdivision).
template <typename S>
std::vector<std::size_t> maximizing_cells(const Subdivision<S>& sub,
                                          const std::vector<S>& mu) {
  if (mu.size() != sub.num_states) throw input_error("belief dimension mismatch");
  S best = dot(sub.cells.front().payoffs, mu);
  for (const auto& c : sub.cells) best = std::max(best, dot(c.payoffs, mu));
  const S tol = scalar_traits<S>::merge_tolerance;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sub.cells.size(); ++i)
    if (dot(sub.cells[i].payoffs, mu) >= best - tol) out.push_back(i);
  return out;
}

/// Piecewise-affine function given by affine pieces on polyhedral regions.
/// Each piece is stored as a pure linear form w.mu (an affine function on
/// the simplex absorbs its constant into w).
template <typename S>
struct PiecewiseAffine {
  struct Piece {
    Polytope<S> region;
    std::vector<S> w;
  };
  std::size_t num_states = 0;
  std::vector<Piece> pieces;
};

template <typename S>
PiecewiseAffine<S> as_piecewise(const Subdivision<S>& sub) {
  PiecewiseAffine<S> out;
  out.num_states = sub.num_states;
  for (const auto& c : sub.cells)
    out.pieces.push_back({c.region, c.payoffs});
  return out;
}

template <typename S>
S evaluate(const PiecewiseAffine<S>& f, const std::vector<S>& mu) {
  for (const auto& p : f.pieces)
    if (p.region.contains_point(mu)) return dot(p.w, mu);
  throw input_error("belief lies outside every piece of the function");
}

/// Checks that pieces agree wherever regions overlap, so the function is
/// single-valued and continuous.  Disagreement reports the two piece
/// indices and the belief where they split.
template <typename S>
struct ContinuityReport {
  bool continuous = true;
  std::size_t piece_a = 0, piece_b = 0;
  std::vector<S> where;
};

template <typename S>
ContinuityReport<S> check_continuity(const PiecewiseAffine<S>& f) {
  const S tol = scalar_traits<S>::strict_tolerance;
  for (std::size_t a = 0; a < f.pieces.size(); ++a)
    for (std::size_t b = a + 1; b < f.pieces.size(); ++b) {
      const auto overlap =
          Polytope<S>::intersect(f.pieces[a].region, f.pieces[b].region);
      for (const auto& v : overlap.vertices()) {
        const S da = dot(f.pieces[a].w, v.p);
        const S db = dot(f.pieces[b].w, v.p);
        if (abs_value(da - db) > tol)
          return {false, a, b, v.p};
      }
    }
  return {};
}

}  // namespace infoval
