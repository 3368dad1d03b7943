#pragma once

#include "infoval/decision.hpp"
#include "infoval/geometry.hpp"
#include "infoval/lp.hpp"
#include "infoval/scalar.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace infoval {

/// True when every cell of `fine` lies inside some cell of `coarse`.
template <typename S>
bool refines(const Subdivision<S>& fine, const Subdivision<S>& coarse) {
  if (fine.num_states != coarse.num_states)
    throw input_error("subdivisions over different state spaces");
  for (const auto& fc : fine.cells) {
    bool inside = false;
    for (const auto& cc : coarse.cells)
      if (cc.region.contains(fc.region)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  return true;
}

template <typename S>
struct RefinedCell {
  std::size_t first_index = 0, second_index = 0;
  std::vector<std::string> first_labels, second_labels;
  Polytope<S> region;
};

/// All full-dimensional pairwise intersections of cells; covers the simplex
/// up to a measure-zero set of facets.
template <typename S>
struct CommonRefinement {
  std::size_t num_states = 0;
  std::vector<RefinedCell<S>> cells;
};

template <typename S>
CommonRefinement<S> common_refinement(const Subdivision<S>& a,
                                      const Subdivision<S>& b) {
  if (a.num_states != b.num_states)
    throw input_error("subdivisions over different state spaces");
  CommonRefinement<S> out;
  out.num_states = a.num_states;
  for (std::size_t i = 0; i < a.cells.size(); ++i)
    for (std::size_t j = 0; j < b.cells.size(); ++j) {
      auto inter = Polytope<S>::intersect(a.cells[i].region, b.cells[j].region);
      if (!is_full_dimensional(inter)) continue;
      out.cells.push_back(RefinedCell<S>{i, j, a.cells[i].labels,
                                         b.cells[j].labels, std::move(inter)});
    }
  return out;
}

/// Nonempty intersection test via LP feasibility (robust to intersections
/// that are single points or faces).
template <typename S>
bool polytopes_intersect(const Polytope<S>& a, const Polytope<S>& b) {
  if (a.trivially_empty() || b.trivially_empty()) return false;
  const std::size_t n = a.num_states();
  std::vector<std::pair<std::vector<S>, S>> rows;
  std::vector<char> strict;
  for (const auto& h : b.halfspaces()) {
    std::vector<S> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -h.normal[i];
    rows.emplace_back(std::move(neg), -h.offset);
    strict.push_back(0);
  }
  return strict_feasibility(rows, strict, a).feasible;
}

/// Triple (mu, mu_prime, lambda_weight) with
/// f((1-l) mu + l mu') > (1-l) f(mu) + l f(mu').
template <typename S>
struct ConvexityWitness {
  std::vector<S> mu, mu_prime;
  S lambda_weight{0};
  S violation{0};
};

template <typename S>
struct ConvexityReport {
  bool convex = true;
  std::optional<ConvexityWitness<S>> witness;
};

/// Re-evaluates a witness from scratch; positive return means the convexity
/// inequality really is violated at the reported triple.
template <typename S>
S witness_violation(const PiecewiseAffine<S>& f, const ConvexityWitness<S>& w) {
  const std::size_t n = f.num_states;
  std::vector<S> mid(n);
  for (std::size_t i = 0; i < n; ++i)
    mid[i] = (S{1} - w.lambda_weight) * w.mu[i] + w.lambda_weight * w.mu_prime[i];
  return evaluate(f, mid) - ((S{1} - w.lambda_weight) * evaluate(f, w.mu) +
                             w.lambda_weight * evaluate(f, w.mu_prime));
}

/// Convexity of a piecewise-affine function whose pieces tile the simplex:
/// convex iff every piece, extended affinely, under-estimates the function
/// at every vertex of every piece.  On failure builds a violating segment
/// from the interior of the worst offending piece to the offended vertex,
/// with the weight placed at the segment's exit from that piece.
template <typename S>
ConvexityReport<S> convexity_report(const PiecewiseAffine<S>& f) {
  if (f.pieces.empty()) throw input_error("piecewise function with no pieces");
  const S tol = scalar_traits<S>::strict_tolerance;

  S worst{0};
  std::size_t worst_piece = 0;
  std::vector<S> worst_vertex;
  for (std::size_t p = 0; p < f.pieces.size(); ++p)
    for (const auto& holder : f.pieces)
      for (const auto& v : holder.region.vertices()) {
        const S gap = dot(f.pieces[p].w, v.p) - evaluate(f, v.p);
        if (gap > worst) {
          worst = gap;
          worst_piece = p;
          worst_vertex = v.p;
        }
      }
  if (worst <= tol) return {};

  const auto& piece = f.pieces[worst_piece];
  const std::vector<S> x = piece.region.interior_point();
  // Exit parameter of the segment x -> v from the offending piece's region.
  S t_exit{1};
  bool bounded = false;
  for (const auto& h : piece.region.halfspaces()) {
    const S at_x = dot(h.normal, x);
    const S at_v = dot(h.normal, worst_vertex);
    if (at_v > at_x) {
      const S t = (h.offset - at_x) / (at_v - at_x);
      if (!bounded || t < t_exit) {
        t_exit = t;
        bounded = true;
      }
    }
  }
  if (!bounded || t_exit <= 0 || t_exit >= 1)
    throw numeric_error("failed to locate convexity breakpoint");

  ConvexityWitness<S> w;
  w.mu = x;
  w.mu_prime = worst_vertex;
  w.lambda_weight = t_exit;
  w.violation = witness_violation(f, w);
  if (w.violation <= 0)
    throw numeric_error("constructed convexity witness does not verify");
  return {false, std::move(w)};
}

/// W = vhat - v on the common refinement of the two subdivisions.
template <typename S>
PiecewiseAffine<S> difference_function(const DecisionProblem<S>& dhat,
                                       const DecisionProblem<S>& d) {
  if (dhat.num_states != d.num_states)
    throw input_error("problems over different state spaces");
  const auto sub_hat = subdivision(dhat);
  const auto sub = subdivision(d);
  const auto ref = common_refinement(sub_hat, sub);
  PiecewiseAffine<S> w;
  w.num_states = d.num_states;
  for (const auto& cell : ref.cells) {
    std::vector<S> diff(d.num_states);
    for (std::size_t s = 0; s < d.num_states; ++s)
      diff[s] = sub_hat.cells[cell.first_index].payoffs[s] -
                sub.cells[cell.second_index].payoffs[s];
    w.pieces.push_back({cell.region, std::move(diff)});
  }
  return w;
}

/// Whether vhat - v is convex; equivalent to the transformation granting a
/// weakly greater value to every information structure at every prior.
template <typename S>
ConvexityReport<S> is_convex_difference(const DecisionProblem<S>& dhat,
                                        const DecisionProblem<S>& d) {
  return convexity_report(difference_function(dhat, d));
}

/// Improvement region {mu : b.mu >= V(mu)} of a candidate action b.
template <typename S>
Polytope<S> improvement_region(const DecisionProblem<S>& d,
                               const std::vector<S>& b) {
  if (b.size() != d.num_states) throw input_error("payoff dimension mismatch");
  std::vector<Halfspace<S>> rows;
  for (const auto& a : d.actions) {
    std::vector<S> normal(d.num_states);
    for (std::size_t s = 0; s < d.num_states; ++s)
      normal[s] = a.payoffs[s] - b[s];
    rows.push_back(Halfspace<S>{std::move(normal), S{0}});
  }
  return Polytope<S>(d.num_states, std::move(rows));
}

/// Strict improvement somewhere: some belief where b beats every action.
template <typename S>
bool strictly_improves_somewhere(const DecisionProblem<S>& d,
                                 const std::vector<S>& b) {
  if (b.size() != d.num_states) throw input_error("payoff dimension mismatch");
  std::vector<std::pair<std::vector<S>, S>> rows;
  std::vector<char> strict;
  for (const auto& a : d.actions) {
    std::vector<S> diff(d.num_states);
    for (std::size_t s = 0; s < d.num_states; ++s)
      diff[s] = b[s] - a.payoffs[s];
    rows.emplace_back(std::move(diff), S{0});
    strict.push_back(1);
  }
  return strict_feasibility(rows, strict, Polytope<S>::simplex(d.num_states))
      .feasible;
}

/// Never even ties the value function: {mu : b.mu >= V(mu)} is empty.
template <typename S>
bool strictly_dominated(const DecisionProblem<S>& d, const std::vector<S>& b) {
  if (b.size() != d.num_states) throw input_error("payoff dimension mismatch");
  std::vector<std::pair<std::vector<S>, S>> rows;
  std::vector<char> strict;
  for (const auto& a : d.actions) {
    std::vector<S> diff(d.num_states);
    for (std::size_t s = 0; s < d.num_states; ++s)
      diff[s] = b[s] - a.payoffs[s];
    rows.emplace_back(std::move(diff), S{0});
    strict.push_back(0);
  }
  return !strict_feasibility(rows, strict, Polytope<S>::simplex(d.num_states))
              .feasible;
}

/// A new action is refining when it strictly improves somewhere and its
/// improvement region sits inside a single cell of the original subdivision.
template <typename S>
bool is_refining(const DecisionProblem<S>& d, const std::vector<S>& b) {
  if (!strictly_improves_somewhere(d, b)) return false;
  const auto region = improvement_region(d, b);
  for (const auto& cell : subdivision(d).cells)
    if (cell.region.contains(region)) return true;
  return false;
}

/// Refining, and the improvement region misses every original cell other
/// than its container entirely.
template <typename S>
bool is_strictly_refining(const DecisionProblem<S>& d, const std::vector<S>& b) {
  if (!strictly_improves_somewhere(d, b)) return false;
  const auto region = improvement_region(d, b);
  const auto sub = subdivision(d);
  std::size_t container = sub.cells.size();
  for (std::size_t i = 0; i < sub.cells.size(); ++i)
    if (sub.cells[i].region.contains(region)) {
      container = i;
      break;
    }
  if (container == sub.cells.size()) return false;
  for (std::size_t i = 0; i < sub.cells.size(); ++i) {
    if (i == container) continue;
    if (polytopes_intersect(region, sub.cells[i].region)) return false;
  }
  return true;
}

/// Each candidate, tested against d alone, is weakly dominated or refining.
template <typename S>
bool is_totally_refining(const DecisionProblem<S>& d,
                         const std::vector<std::vector<S>>& new_actions) {
  for (const auto& b : new_actions) {
    if (!strictly_improves_somewhere(d, b)) continue;  // weakly dominated
    if (!is_refining(d, b)) return false;
  }
  return true;
}

/// Each candidate is strictly dominated or strictly refining.
template <typename S>
bool is_totally_strictly_refining(
    const DecisionProblem<S>& d, const std::vector<std::vector<S>>& new_actions) {
  for (const auto& b : new_actions) {
    if (strictly_dominated(d, b)) continue;
    if (!is_strictly_refining(d, b)) return false;
  }
  return true;
}

/// True when some kept action is undominated in the full problem, so the
/// removal leaves usable pieces of the old value function behind.
template <typename S>
bool has_leftovers(const DecisionProblem<S>& d,
                   const std::vector<std::string>& kept) {
  if (kept.empty()) throw input_error("kept action set must be nonempty");
  for (const auto& k : kept) {
    bool known = false;
    for (const auto& a : d.actions)
      if (a.label == k) known = true;
    if (!known) throw input_error("unknown action label: " + k);
  }
  for (const auto& g : action_groups(d)) {
    if (!g.undominated) continue;
    for (const auto& l : g.labels)
      if (std::find(kept.begin(), kept.end(), l) != kept.end()) return true;
  }
  return false;
}

/// Value functions differ somewhere; checked at the vertices of the common
/// refinement, where two piecewise-affine functions must differ if they
/// differ at all.
template <typename S>
bool is_consequential(const DecisionProblem<S>& d,
                      const DecisionProblem<S>& dhat) {
  if (d.num_states != dhat.num_states)
    throw input_error("problems over different state spaces");
  const S tol = scalar_traits<S>::strict_tolerance;
  const auto ref = common_refinement(subdivision(d), subdivision(dhat));
  for (const auto& cell : ref.cells)
    for (const auto& v : cell.region.vertices())
      if (abs_value(value_at(d, v.p) - value_at(dhat, v.p)) > tol) return true;
  return false;
}

/// Affine modifier l(mu) = lambda.mu + tau.
template <typename S>
struct AffineWitness {
  std::vector<S> lambda;
  S tau{0};
};

template <typename S>
struct ShiftMajorization {
  bool holds = false;
  std::optional<AffineWitness<S>> witness;
  S envelope_gap{0};  // W(mu0) - lower envelope of W at mu0, when it fails
};

/// Minimum of sum lambda_i f(v_i) over convex weights on the vertices of
/// f's pieces whose barycenter is mu0: the lower convex envelope of f.
template <typename S>
S lower_convex_envelope_at(const PiecewiseAffine<S>& f,
                           const std::vector<S>& mu0) {
  if (mu0.size() != f.num_states) throw input_error("belief dimension mismatch");
  std::vector<std::vector<S>> verts;
  std::vector<S> vals;
  for (const auto& p : f.pieces)
    for (const auto& v : p.region.vertices()) {
      verts.push_back(v.p);
      vals.push_back(evaluate(f, v.p));
    }
  if (verts.empty()) throw input_error("piecewise function with empty pieces");

  LinearProgram<S> lp;
  lp.sense = Sense::Minimize;
  lp.objective = vals;
  for (std::size_t s = 0; s < f.num_states; ++s) {
    LPRow<S> row;
    row.coeffs.reserve(verts.size());
    for (const auto& v : verts) row.coeffs.push_back(v[s]);
    row.rel = Relation::Equal;
    row.rhs = mu0[s];
    lp.rows.push_back(std::move(row));
  }
  {
    LPRow<S> row;
    row.coeffs.assign(verts.size(), S{1});
    row.rel = Relation::Equal;
    row.rhs = S{1};
    lp.rows.push_back(std::move(row));
  }
  const auto res = solve_lp(lp);
  if (res.status != LPStatus::Optimal)
    throw input_error("belief outside the function's domain");
  return res.value;
}

/// Existence of an affine l with vhat + l = v at mu0 and vhat + l >= v on
/// the whole simplex, decided by LP feasibility over refinement vertices.
template <typename S>
ShiftMajorization<S> shift_majorizes(const DecisionProblem<S>& dhat,
                                     const DecisionProblem<S>& d,
                                     const std::vector<S>& mu0) {
  if (d.num_states != dhat.num_states)
    throw input_error("problems over different state spaces");
  if (mu0.size() != d.num_states) throw input_error("belief dimension mismatch");
  for (const auto& c : mu0)
    if (!(c > 0)) throw input_error("shift-majorization requires an interior prior");

  const auto w = difference_function(dhat, d);
  const std::size_t n = d.num_states;

  // Variables: lambda (n, free), tau (free).  Constraint rows:
  //   lambda.mu0 + tau  = -W(mu0)
  //   lambda.v   + tau >= -W(v)   for every refinement vertex v.
  LinearProgram<S> lp;
  lp.sense = Sense::Maximize;
  lp.objective.assign(n + 1, S{0});
  lp.bounds.assign(n + 1, VarBounds<S>::free_var());
  {
    LPRow<S> row;
    row.coeffs = mu0;
    row.coeffs.push_back(S{1});
    row.rel = Relation::Equal;
    row.rhs = -evaluate(w, mu0);
    lp.rows.push_back(std::move(row));
  }
  for (const auto& p : w.pieces)
    for (const auto& v : p.region.vertices()) {
      LPRow<S> row;
      row.coeffs = v.p;
      row.coeffs.push_back(S{1});
      row.rel = Relation::GreaterEq;
      row.rhs = -dot(p.w, v.p);
      lp.rows.push_back(std::move(row));
    }

  const auto res = solve_lp(lp);
  ShiftMajorization<S> out;
  if (res.status == LPStatus::Optimal) {
    out.holds = true;
    AffineWitness<S> witness;
    witness.lambda.assign(res.solution.begin(), res.solution.begin() + n);
    witness.tau = res.solution[n];
    out.witness = std::move(witness);
  } else {
    out.holds = false;
    out.envelope_gap = evaluate(w, mu0) - lower_convex_envelope_at(w, mu0);
  }
  return out;
}

template <typename S>
struct PriorReport {
  std::vector<S> prior;
  std::vector<std::string> overlap;  // actions optimal in both problems
  bool some_action_remains_prior_optimal = false;
  bool generic = false;
  bool shift_majorizes = false;
  std::optional<AffineWitness<S>> shift_witness;
  S envelope_gap{0};
  // For a generic prior under a removal: is the new prior-optimal action
  // pointwise weakly dominated by the old one?
  std::optional<bool> new_optimal_dominated_by_old;
};

template <typename S>
struct TransformationVerdict {
  bool convex_difference = false;
  bool refines = false;
  bool greater_value_free_prior = false;  // equals convex_difference
  std::optional<ConvexityWitness<S>> nonconvexity_witness;
  std::optional<std::pair<std::vector<S>, AffineWitness<S>>> shift_majorizes_at;
  std::vector<PriorReport<S>> prior_reports;
  // Set when one action set contains the other (matched by label and
  // payoffs): the extra actions tested for total refinement against the
  // smaller problem.
  std::optional<bool> added_totally_refining;
  std::optional<bool> removed_totally_refining_wrt_new;
};

namespace comparedetail {

template <typename S>
const Action<S>* find_action(const DecisionProblem<S>& d, const Action<S>& a) {
  for (const auto& own : d.actions)
    if (own.label == a.label && decdetail::same_payoffs(own.payoffs, a.payoffs))
      return &own;
  return nullptr;
}

template <typename S>
std::vector<std::vector<S>> actions_not_in(const DecisionProblem<S>& big,
                                           const DecisionProblem<S>& small) {
  std::vector<std::vector<S>> out;
  for (const auto& a : big.actions)
    if (!find_action(small, a)) out.push_back(a.payoffs);
  return out;
}

template <typename S>
bool contains_all_actions(const DecisionProblem<S>& big,
                          const DecisionProblem<S>& small) {
  for (const auto& a : small.actions)
    if (!find_action(big, a)) return false;
  return true;
}

}  // namespace comparedetail

template <typename S>
TransformationVerdict<S> classify_transformation(
    const DecisionProblem<S>& d, const DecisionProblem<S>& dhat,
    const std::vector<std::vector<S>>& priors = {}) {
  if (d.num_states != dhat.num_states)
    throw input_error("problems over different state spaces");
  TransformationVerdict<S> out;

  const auto sub = subdivision(d);
  const auto sub_hat = subdivision(dhat);
  out.refines = refines(sub_hat, sub);
  auto conv = is_convex_difference(dhat, d);
  out.convex_difference = conv.convex;
  out.greater_value_free_prior = conv.convex;
  out.nonconvexity_witness = std::move(conv.witness);

  const bool addition = comparedetail::contains_all_actions(dhat, d) &&
                        dhat.actions.size() > d.actions.size();
  const bool removal = comparedetail::contains_all_actions(d, dhat) &&
                       d.actions.size() > dhat.actions.size();
  if (addition)
    out.added_totally_refining =
        is_totally_refining(d, comparedetail::actions_not_in(dhat, d));
  if (removal)
    out.removed_totally_refining_wrt_new =
        is_totally_refining(dhat, comparedetail::actions_not_in(d, dhat));

  for (const auto& prior : priors) {
    PriorReport<S> rep;
    rep.prior = prior;
    const auto opt = optimal_actions(d, prior);
    const auto opt_hat = optimal_actions(dhat, prior);
    for (const auto& l : opt)
      if (std::find(opt_hat.begin(), opt_hat.end(), l) != opt_hat.end())
        rep.overlap.push_back(l);
    rep.some_action_remains_prior_optimal = !rep.overlap.empty();
    rep.generic = maximizing_cells(sub, prior).size() == 1 &&
                  maximizing_cells(sub_hat, prior).size() == 1;

    bool interior = true;
    for (const auto& c : prior)
      if (!(c > 0)) interior = false;
    if (interior) {
      auto sm = shift_majorizes(dhat, d, prior);
      rep.shift_majorizes = sm.holds;
      rep.shift_witness = std::move(sm.witness);
      rep.envelope_gap = sm.envelope_gap;
      if (rep.shift_majorizes && !out.shift_majorizes_at)
        out.shift_majorizes_at = std::make_pair(prior, *rep.shift_witness);
    }

    if (removal && rep.generic && !opt.empty() && !opt_hat.empty()) {
      const Action<S>* a_old = nullptr;
      for (const auto& a : d.actions)
        if (a.label == opt.front()) a_old = &a;
      const Action<S>* a_new = nullptr;
      for (const auto& a : dhat.actions)
        if (a.label == opt_hat.front()) a_new = &a;
      if (a_old && a_new) {
        bool dominated = true;
        for (std::size_t s = 0; s < d.num_states; ++s)
          if (a_new->payoffs[s] > a_old->payoffs[s]) dominated = false;
        rep.new_optimal_dominated_by_old = dominated;
      }
    }
    out.prior_reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace infoval
