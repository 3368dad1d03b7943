#pragma once

#include "infoval/acquisition.hpp"
#include "infoval/compare.hpp"
#include "infoval/decision.hpp"
#include "infoval/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace infoval {

/// Menu expansion: append fresh actions and revalidate the problem.
template <typename S>
DecisionProblem<S> add_actions(const DecisionProblem<S>& d,
                               const std::vector<Action<S>>& extra) {
  auto actions = d.actions;
  for (const auto& a : extra) {
    if (a.payoffs.size() != d.num_states)
      throw input_error("added action has the wrong payoff dimension");
    actions.push_back(a);
  }
  return make_problem(d.num_states, std::move(actions));
}

/// Menu restriction: drop the named actions, keeping at least one.
template <typename S>
DecisionProblem<S> remove_actions(const DecisionProblem<S>& d,
                                  const std::vector<std::string>& labels) {
  for (const auto& l : labels) {
    bool known = false;
    for (const auto& a : d.actions)
      if (a.label == l) known = true;
    if (!known) throw input_error("cannot remove unknown action: " + l);
  }
  std::vector<Action<S>> kept;
  for (const auto& a : d.actions)
    if (std::find(labels.begin(), labels.end(), a.label) == labels.end())
      kept.push_back(a);
  if (kept.empty()) throw input_error("removal would leave an empty menu");
  return make_problem(d.num_states, std::move(kept));
}

/// Positive affine change of payoff units applied to every action.
template <typename S>
DecisionProblem<S> affine_transform(const DecisionProblem<S>& d, const S& scale,
                                    const S& shift) {
  if (!(scale > S{0}))
    throw input_error("affine payoff transform needs a positive scale");
  auto actions = d.actions;
  for (auto& a : actions)
    for (auto& u : a.payoffs) u = scale * u + shift;
  return make_problem(d.num_states, std::move(actions));
}

/// Marginal-utility ratio exp(-alpha (w_hat - w)) between two wealth levels
/// under constant absolute risk aversion; payoffs at wealth w_hat are the
/// payoffs at wealth w rescaled by this factor.
inline double cara_wealth_factor(double alpha, double wealth,
                                 double wealth_hat) {
  if (!(alpha > 0))
    throw input_error("absolute risk aversion must be positive");
  return std::exp(-alpha * (wealth_hat - wealth));
}

/// Named families of increasing payoff relabelings phi.
struct PhiSpec {
  enum class Family { Affine, Exp, Power, LogShift };
  Family family = Family::Affine;
  double a = 1;  // slope, rate, exponent, or shift depending on the family
  double b = 0;  // intercept, used by the affine family only
};

inline double eval_phi(const PhiSpec& phi, double x) {
  switch (phi.family) {
    case PhiSpec::Family::Affine:
      if (!(phi.a > 0)) throw input_error("affine relabeling needs a positive slope");
      return phi.a * x + phi.b;
    case PhiSpec::Family::Exp:
      if (phi.a == 0) throw input_error("exponential relabeling needs a nonzero rate");
      return (1 - std::exp(-phi.a * x)) / phi.a;
    case PhiSpec::Family::Power:
      if (!(phi.a > 0)) throw input_error("power relabeling needs a positive exponent");
      if (x < 0)
        throw input_error("power relabeling is only defined for nonnegative payoffs");
      return std::pow(x, phi.a);
    case PhiSpec::Family::LogShift:
      if (!(x + phi.a > 0))
        throw input_error("log relabeling needs payoffs above the shift");
      return std::log(x + phi.a);
  }
  throw input_error("unknown relabeling family");
}

enum class CurvatureShape { Concave, Convex, General };

struct ComposedProblem {
  DecisionProblem<double> problem;
  CurvatureShape shape = CurvatureShape::General;
  PhiSpec phi;
};

/// Relabel every payoff entry through phi. The relabeling must be strictly
/// increasing on the payoff range, checked on a sampled mesh.
inline ComposedProblem compose_utility(const DecisionProblem<double>& d,
                                       const PhiSpec& phi,
                                       CurvatureShape shape) {
  double lo = 0, hi = 0;
  bool seen = false;
  for (const auto& a : d.actions)
    for (double u : a.payoffs) {
      if (!seen) {
        lo = hi = u;
        seen = true;
      }
      lo = std::min(lo, u);
      hi = std::max(hi, u);
    }
  if (!seen) throw input_error("decision problem has no actions");
  if (hi > lo) {
    constexpr int kSamples = 64;
    double prev = eval_phi(phi, lo);
    for (int i = 1; i <= kSamples; ++i) {
      const double x = lo + (hi - lo) * i / kSamples;
      const double y = eval_phi(phi, x);
      if (!(y > prev))
        throw input_error(
            "payoff relabeling is not strictly increasing on the payoff range");
      prev = y;
    }
  } else {
    eval_phi(phi, lo);  // still reject domain violations
  }
  auto actions = d.actions;
  for (auto& a : actions)
    for (auto& u : a.payoffs) u = eval_phi(phi, u);
  return ComposedProblem{make_problem(d.num_states, std::move(actions)), shape,
                         phi};
}

namespace transdetail {

/// Interval [lo, hi] covered by a two-state cell, in the state-1 probability.
inline std::pair<double, double> cell_interval(const Cell<double>& cell) {
  const auto verts = cell.region.vertices();
  double lo = 1, hi = 0;
  for (const auto& v : verts) {
    lo = std::min(lo, v.p[1]);
    hi = std::max(hi, v.p[1]);
  }
  return {lo, hi};
}

struct FirstKink {
  double kink = 0;           // right endpoint of the leftmost cell
  std::string left_label;    // action optimal on the leftmost cell
  std::string right_label;   // action optimal on the adjacent cell
};

inline FirstKink first_kink(const Subdivision<double>& sub) {
  std::vector<std::pair<std::pair<double, double>, const Cell<double>*>> iv;
  iv.reserve(sub.cells.size());
  for (const auto& c : sub.cells) iv.emplace_back(cell_interval(c), &c);
  std::sort(iv.begin(), iv.end(), [](const auto& x, const auto& y) {
    return x.first.first < y.first.first;
  });
  FirstKink out;
  out.kink = iv[0].first.second;
  out.left_label = iv[0].second->labels.front();
  out.right_label = iv[1].second->labels.front();
  return out;
}

}  // namespace transdetail

struct PerturbationOutcome {
  DecisionProblem<double> perturbed;
  std::string case_name;
  bool broke = false;
  double eps_used = 0;
  double kink_original = 0;
  double kink_relabeled = 0;
};

/// For a two-state problem whose phi-relabeled subdivision refines the
/// original one, nudge a single payoff entry so the refinement fails. The
/// perturbation target depends on how the two leftmost kinks line up:
/// matching kinks with the same adjacent action shift the leftmost action
/// down, matching kinks with a different adjacent action shift the original
/// adjacent action up, and a relabeled kink strictly inside the original
/// first cell shifts the leftmost action up.
inline PerturbationOutcome perturb_break_refinement(
    const DecisionProblem<double>& d, const PhiSpec& phi, double eps) {
  if (d.num_states != 2)
    throw input_error("refinement perturbation is a two-state operation");
  if (!(eps > 0)) throw input_error("perturbation size must be positive");
  const auto sub = subdivision(d);
  if (sub.cells.size() < 2)
    throw inapplicable_error("the original value function has a single piece");
  const auto composed = compose_utility(d, phi, CurvatureShape::General);
  const auto rsub = subdivision(composed.problem);
  if (!refines(rsub, sub))
    throw inapplicable_error(
        "the relabeled subdivision does not refine the original one");

  const auto orig = transdetail::first_kink(sub);
  const auto rel = transdetail::first_kink(rsub);
  const double tol = scalar_traits<double>::merge_tolerance;

  std::string case_name;
  std::string target;
  double direction = 0;
  if (std::abs(rel.kink - orig.kink) <= tol) {
    const std::vector<double> at{1 - rel.kink, rel.kink};
    const auto opts = optimal_actions(composed.problem, at);
    const bool same_neighbor =
        std::find(opts.begin(), opts.end(), orig.right_label) != opts.end();
    if (same_neighbor) {
      case_name = "case 1a";
      target = orig.left_label;
      direction = -1;
    } else {
      case_name = "case 1b";
      target = orig.right_label;
      direction = 1;
    }
  } else if (rel.kink < orig.kink) {
    case_name = "case 2";
    target = orig.left_label;
    direction = 1;
  } else {
    throw numeric_error(
        "refined subdivision places its first kink beyond the original");
  }

  auto perturb = [&](double amount) {
    auto actions = d.actions;
    for (auto& a : actions)
      if (a.label == target) a.payoffs[0] += direction * amount;
    return make_problem(d.num_states, std::move(actions));
  };

  double trial = eps;
  for (int attempt = 0; attempt < 40; ++attempt) {
    auto pert = perturb(trial);
    const auto pert_rel = compose_utility(pert, phi, CurvatureShape::General);
    if (!refines(subdivision(pert_rel.problem), subdivision(pert)))
      return PerturbationOutcome{std::move(pert), case_name, true,
                                 trial,          orig.kink, rel.kink};
    trial /= 2;
  }
  return PerturbationOutcome{perturb(eps), case_name, false,
                             eps,          orig.kink, rel.kink};
}

/// Two-type information sale: the high type's value advantage over the low
/// type must be convex.
template <typename S>
struct ScreeningInstance {
  DecisionProblem<S> high;
  DecisionProblem<S> low;
  S high_share{0};
  std::vector<S> prior;
  UPSCost<S> cost;
};

template <typename S>
ScreeningInstance<S> make_screening_instance(DecisionProblem<S> high,
                                             DecisionProblem<S> low,
                                             S high_share, std::vector<S> prior,
                                             UPSCost<S> cost) {
  if (high.num_states != low.num_states)
    throw input_error("screening types must share a state space");
  if (!(high_share > S{0}) || !(high_share < S{1}))
    throw input_error("type share must lie strictly between zero and one");
  if (prior.size() != high.num_states)
    throw input_error("prior dimension mismatch");
  if (!is_convex_difference(high, low).convex)
    throw input_error(
        "screening needs a convex value advantage for the high type");
  return ScreeningInstance<S>{std::move(high), std::move(low), high_share,
                              std::move(prior), std::move(cost)};
}

/// First- and second-best menus of experiments with sequential prices. The
/// high type's second-best experiment coincides with its first-best one; the
/// low type's is distorted through the virtual objective
/// (low - share * high) / (1 - share).
template <typename S>
struct ScreeningSolution {
  AcquisitionSolution<S> high_first_best;
  AcquisitionSolution<S> low_first_best;
  AcquisitionSolution<S> low_second_best;
  S high_price_fb{0};
  S low_price_fb{0};
  S high_price_sb{0};
  S low_price_sb{0};
  S high_ir_slack{0};
  S low_ic_slack{0};
  bool low_sb_mpc_of_fb = false;
  bool low_fb_strict_mpc_of_sb = false;
  bool high_fb_strict_mpc_of_low_fb = false;
  bool virtual_optimum_multiple = false;
};

template <typename S>
ScreeningSolution<S> screening_solve(const ScreeningInstance<S>& inst,
                                     std::size_t grid_resolution) {
  const auto& mu0 = inst.prior;
  auto expected_under = [](const DecisionProblem<S>& d,
                           const PosteriorDistribution<S>& phi) {
    S acc{0};
    for (const auto& [b, w] : phi.support) acc += w * value_at(d, b.p);
    return acc;
  };
  auto gross = [&](const DecisionProblem<S>& d,
                   const PosteriorDistribution<S>& phi) {
    return expected_under(d, phi) - eval_cost(inst.cost, phi, mu0);
  };

  ScreeningSolution<S> out;
  out.high_first_best =
      solve_acquisition(inst.high, inst.cost, mu0, grid_resolution);
  out.low_first_best =
      solve_acquisition(inst.low, inst.cost, mu0, grid_resolution);
  out.high_price_fb = out.high_first_best.net_value - value_at(inst.high, mu0);
  out.low_price_fb = out.low_first_best.net_value - value_at(inst.low, mu0);

  const S share = inst.high_share;
  auto virtual_value = [&](const std::vector<S>& mu) {
    return (value_at(inst.low, mu) - share * value_at(inst.high, mu)) /
           (S{1} - share);
  };
  out.low_second_best =
      solve_acquisition_with(virtual_value, inst.cost, mu0, grid_resolution);

  out.low_price_sb = gross(inst.low, out.low_second_best.distribution) -
                     value_at(inst.low, mu0);
  out.high_price_sb = gross(inst.high, out.high_first_best.distribution) -
                      gross(inst.high, out.low_second_best.distribution) +
                      out.low_price_sb;
  out.high_ir_slack = gross(inst.high, out.high_first_best.distribution) -
                      out.high_price_sb - value_at(inst.high, mu0);
  out.low_ic_slack =
      (gross(inst.low, out.low_second_best.distribution) - out.low_price_sb) -
      (gross(inst.low, out.high_first_best.distribution) - out.high_price_sb);

  out.low_sb_mpc_of_fb = is_mpc(out.low_second_best.distribution,
                                out.low_first_best.distribution);
  out.low_fb_strict_mpc_of_sb = is_strict_mpc(
      out.low_first_best.distribution, out.low_second_best.distribution);
  out.high_fb_strict_mpc_of_low_fb = is_strict_mpc(
      out.high_first_best.distribution, out.low_first_best.distribution);

  // Alternative optima in the virtual program: a grid column with zero
  // reduced cost that lies outside the returned support.
  {
    const auto& sol = out.low_second_best;
    const std::size_t n = mu0.size();
    const S tol = scalar_traits<S>::strict_tolerance;
    for (const auto& g : sol.grid) {
      S priced = sol.row_duals[n];
      for (std::size_t s = 0; s < n; ++s) priced += sol.row_duals[s] * g.p[s];
      const S reduced =
          virtual_value(g.p) - eval_potential(inst.cost, g.p) - priced;
      if (reduced < -tol) continue;
      bool in_support = false;
      for (const auto& [b, w] : sol.distribution.support)
        if (acqdetail::same_belief(b.p, g.p)) in_support = true;
      if (!in_support) {
        out.virtual_optimum_multiple = true;
        break;
      }
    }
  }
  return out;
}

/// Delegated purchase of a fixed experiment at a fee the agent alone pays.
template <typename S>
struct DelegationReport {
  bool agent_buys_baseline = false;
  bool agent_buys_extended = false;
  S principal_baseline{0};
  S principal_extended{0};
  bool extras_totally_refining = false;
};

template <typename S>
DelegationReport<S> delegation_compare(const DecisionProblem<S>& d,
                                       const std::vector<Action<S>>& extra,
                                       const S& fee,
                                       const PosteriorDistribution<S>& experiment,
                                       const std::vector<S>& mu0) {
  if (!(fee > S{0})) throw input_error("the experiment fee must be positive");
  if (!plausible_for(experiment, mu0))
    throw input_error("experiment mean must match the prior");
  const auto extended = extra.empty() ? d : add_actions(d, extra);
  auto expected_under = [&](const DecisionProblem<S>& p) {
    S acc{0};
    for (const auto& [b, w] : experiment.support) acc += w * value_at(p, b.p);
    return acc;
  };

  DelegationReport<S> out;
  const S base_gain = expected_under(d) - value_at(d, mu0);
  const S ext_gain = expected_under(extended) - value_at(extended, mu0);
  out.agent_buys_baseline = base_gain >= fee;
  out.agent_buys_extended = ext_gain >= fee;
  out.principal_baseline =
      out.agent_buys_baseline ? expected_under(d) : value_at(d, mu0);
  out.principal_extended =
      out.agent_buys_extended ? expected_under(extended) : value_at(extended, mu0);

  std::vector<std::vector<S>> rows;
  rows.reserve(extra.size());
  for (const auto& a : extra) rows.push_back(a.payoffs);
  out.extras_totally_refining = is_totally_refining(d, rows);
  if (out.extras_totally_refining &&
      out.principal_extended < out.principal_baseline)
    throw numeric_error("totally refining extras reduced the principal's payoff");
  return out;
}

}  // namespace infoval
