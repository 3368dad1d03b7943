#pragma once

#include "infoval/compare.hpp"
#include "infoval/decision.hpp"
#include "infoval/geometry.hpp"
#include "infoval/lp.hpp"
#include "infoval/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace infoval {

/// Finite-support distribution over posterior beliefs.
template <typename S>
struct PosteriorDistribution {
  std::vector<std::pair<Belief<S>, S>> support;

  std::vector<S> mean() const {
    if (support.empty()) throw input_error("empty posterior distribution");
    std::vector<S> m(support.front().first.size(), S{0});
    for (const auto& [b, w] : support)
      for (std::size_t i = 0; i < m.size(); ++i) m[i] += w * b.p[i];
    return m;
  }
};

template <typename S>
PosteriorDistribution<S> make_distribution(
    std::vector<std::pair<Belief<S>, S>> support) {
  if (support.empty()) throw input_error("empty posterior distribution");
  S total{0};
  for (const auto& [b, w] : support) {
    if (b.size() != support.front().first.size())
      throw input_error("posterior dimension mismatch");
    if (!(w > 0)) throw input_error("posterior weights must be positive");
    total += w;
  }
  if constexpr (scalar_traits<S>::is_exact) {
    if (total != 1) throw input_error("posterior weights must sum to 1");
  } else {
    if (abs_value(total - 1.0) > 1e-9)
      throw input_error("posterior weights must sum to 1");
  }
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      bool same = true;
      for (std::size_t s = 0; s < support[i].first.size(); ++s)
        if (abs_value(support[i].first.p[s] - support[j].first.p[s]) >
            scalar_traits<S>::merge_tolerance)
          same = false;
      if (same) throw input_error("posterior support points must be distinct");
    }
  return PosteriorDistribution<S>{std::move(support)};
}

template <typename S>
bool plausible_for(const PosteriorDistribution<S>& phi,
                   const std::vector<S>& mu0) {
  auto m = phi.mean();
  if (m.size() != mu0.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i)
    if (abs_value(m[i] - mu0[i]) > scalar_traits<S>::strict_tolerance)
      return false;
  return true;
}

/// One convex paraboloid sheet alpha.mu + beta + eps * |mu - anchor|^2.
template <typename S>
struct ParaboloidPiece {
  std::vector<S> alpha;
  S beta{0};
  S eps{0};
  std::vector<S> anchor;
};

/// Potential c of a uniformly posterior-separable cost D(phi) =
/// E_phi c - c(prior).  The concrete families share one tagged struct so
/// costs can be serialized and re-read exactly.
template <typename S>
struct UPSCost {
  enum class Family { ScaledEntropy, Quadratic, MaxParaboloid, AffineShiftOfValue };
  Family family = Family::Quadratic;

  S entropy_scale{1};                      // ScaledEntropy
  std::vector<std::vector<S>> quadratic;   // Quadratic: c(mu) = mu^T Q mu
  std::vector<ParaboloidPiece<S>> pieces;  // MaxParaboloid
  // AffineShiftOfValue: c = shift_eps * regularizer + value of base.
  std::shared_ptr<const DecisionProblem<S>> base;
  S shift_eps{0};
  std::shared_ptr<const UPSCost<S>> regularizer;
};

template <typename S>
UPSCost<S> make_entropy_cost(S scale) {
  if (!(scale > 0)) throw input_error("entropy scale must be positive");
  UPSCost<S> c;
  c.family = UPSCost<S>::Family::ScaledEntropy;
  c.entropy_scale = scale;
  return c;
}

template <typename S>
UPSCost<S> make_quadratic_cost(std::vector<std::vector<S>> q) {
  if (q.empty()) throw input_error("quadratic cost needs a matrix");
  for (const auto& row : q)
    if (row.size() != q.size())
      throw input_error("quadratic cost matrix must be square");
  UPSCost<S> c;
  c.family = UPSCost<S>::Family::Quadratic;
  c.quadratic = std::move(q);
  return c;
}

template <typename S>
UPSCost<S> make_paraboloid_cost(std::vector<ParaboloidPiece<S>> pieces) {
  if (pieces.empty()) throw input_error("paraboloid cost needs pieces");
  for (const auto& p : pieces) {
    if (p.alpha.size() != p.anchor.size())
      throw input_error("paraboloid piece dimension mismatch");
    if (!(p.eps > 0))
      throw input_error("paraboloid curvature must be positive");
  }
  UPSCost<S> c;
  c.family = UPSCost<S>::Family::MaxParaboloid;
  c.pieces = std::move(pieces);
  return c;
}

/// c_eps = eps * regularizer + value function of vhat: the cost under which
/// learning is worthless for vhat yet strictly valuable for any value
/// function whose difference to vhat fails convexity.
template <typename S>
UPSCost<S> adversarial_cost(const DecisionProblem<S>& vhat, S eps,
                            const UPSCost<S>& regularizer) {
  if (!(eps > 0)) throw input_error("adversarial cost needs eps > 0");
  UPSCost<S> c;
  c.family = UPSCost<S>::Family::AffineShiftOfValue;
  c.base = std::make_shared<const DecisionProblem<S>>(vhat);
  c.shift_eps = eps;
  c.regularizer = std::make_shared<const UPSCost<S>>(regularizer);
  return c;
}

template <typename S>
S eval_potential(const UPSCost<S>& cost, const std::vector<S>& mu) {
  switch (cost.family) {
    case UPSCost<S>::Family::ScaledEntropy: {
      if constexpr (scalar_traits<S>::is_exact) {
        throw inapplicable_error("entropy cost requires float mode");
      } else {
        S acc{0};
        for (const auto& p : mu) {
          if (p < -1e-12) throw input_error("negative belief coordinate");
          if (p > 0) acc += p * std::log(p);
        }
        return cost.entropy_scale * acc;
      }
    }
    case UPSCost<S>::Family::Quadratic: {
      if (cost.quadratic.size() != mu.size())
        throw input_error("quadratic cost dimension mismatch");
      S acc{0};
      for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < mu.size(); ++j)
          acc += mu[i] * cost.quadratic[i][j] * mu[j];
      return acc;
    }
    case UPSCost<S>::Family::MaxParaboloid: {
      if (cost.pieces.empty())
        throw input_error("paraboloid cost has no pieces");
      std::optional<S> best;
      for (const auto& p : cost.pieces) {
        if (p.alpha.size() != mu.size())
          throw input_error("paraboloid cost dimension mismatch");
        S val = dot(p.alpha, mu) + p.beta;
        for (std::size_t i = 0; i < mu.size(); ++i)
          val += p.eps * (mu[i] - p.anchor[i]) * (mu[i] - p.anchor[i]);
        if (!best || val > *best) best = val;
      }
      return *best;
    }
    case UPSCost<S>::Family::AffineShiftOfValue:
      return cost.shift_eps * eval_potential(*cost.regularizer, mu) +
             value_at(*cost.base, mu);
  }
  throw input_error("unknown cost family");
}

/// Sampled midpoint strict convexity on seeded random belief pairs.
template <typename S>
bool check_strict_convexity(const UPSCost<S>& cost, std::size_t num_states,
                            std::size_t samples = 64,
                            std::uint64_t seed = 8211u) {
  std::uint64_t state = seed;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  };
  auto random_belief = [&]() {
    std::vector<S> mu(num_states);
    S total{0};
    for (auto& c : mu) {
      c = S(static_cast<long>(next() % 1000000 + 1));
      total += c;
    }
    for (auto& c : mu) c /= total;
    return mu;
  };
  for (std::size_t k = 0; k < samples; ++k) {
    auto a = random_belief();
    auto b = random_belief();
    bool same = true;
    for (std::size_t i = 0; i < num_states; ++i)
      if (abs_value(a[i] - b[i]) > scalar_traits<S>::merge_tolerance)
        same = false;
    if (same) continue;
    std::vector<S> mid(num_states);
    for (std::size_t i = 0; i < num_states; ++i)
      mid[i] = (a[i] + b[i]) / 2;
    const S lhs = eval_potential(cost, mid);
    const S rhs = (eval_potential(cost, a) + eval_potential(cost, b)) / 2;
    if (!(lhs < rhs - scalar_traits<S>::strict_tolerance / 2)) return false;
  }
  return true;
}

/// D(phi) = E_phi c - c(mu0); zero for the degenerate distribution at mu0.
template <typename S>
S eval_cost(const UPSCost<S>& cost, const PosteriorDistribution<S>& phi,
            const std::vector<S>& mu0) {
  if (!plausible_for(phi, mu0))
    throw input_error("distribution is not Bayes-plausible for the prior");
  S acc{0};
  for (const auto& [b, w] : phi.support) acc += w * eval_potential(cost, b.p);
  return acc - eval_potential(cost, mu0);
}

template <typename S>
struct AcquisitionSolution {
  PosteriorDistribution<S> distribution;
  S net_value{0};      // E_phi v - D(phi)
  S lp_value{0};       // E_phi (v - c)
  std::vector<Belief<S>> grid;
  S dual_gap{0};
  std::vector<S> row_duals;  // mean rows first, then the mass row
};

inline std::size_t default_grid_resolution(std::size_t num_states) {
  switch (num_states) {
    case 1: return 2;
    case 2: return 400;
    case 3: return 60;
    case 4: return 20;
    default: throw input_error("acquisition supports at most 4 states");
  }
}

/// All beliefs with coordinates k/resolution.
template <typename S>
std::vector<Belief<S>> simplex_grid(std::size_t num_states,
                                    std::size_t resolution) {
  if (num_states == 0) throw input_error("grid over zero states");
  if (resolution < 2) throw input_error("grid resolution must be at least 2");
  const long r = static_cast<long>(resolution);
  std::vector<Belief<S>> out;
  std::vector<long> counts(num_states, 0);
  counts[0] = r;
  while (true) {
    std::vector<S> coords(num_states);
    for (std::size_t i = 0; i < num_states; ++i)
      coords[i] = S(counts[i]) / S(r);
    out.push_back(Belief<S>{std::move(coords)});
    // Next composition of r into num_states parts, colex order.
    std::size_t i = 0;
    while (i + 1 < num_states && counts[i] == 0) ++i;
    if (i + 1 == num_states) break;
    const long head = counts[i];
    counts[i] = 0;
    counts[0] = head - 1;
    counts[i + 1] += 1;
  }
  return out;
}

namespace acqdetail {

template <typename S>
bool same_belief(const std::vector<S>& a, const std::vector<S>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (abs_value(a[i] - b[i]) > scalar_traits<S>::merge_tolerance)
      return false;
  return true;
}

template <typename S>
S support_threshold() {
  if constexpr (scalar_traits<S>::is_exact)
    return S{0};
  else
    return S{1e-9};
}

}  // namespace acqdetail

/// Concavification of (objective - cost potential) at mu0 over a finite
/// belief grid: the linear program over Bayes-plausible mixtures of grid
/// points.  The prior and any extra points are appended to the grid, so the
/// degenerate no-learning distribution is always feasible.
template <typename S, typename F>
AcquisitionSolution<S> solve_acquisition_with(
    F&& objective, const UPSCost<S>& cost, const std::vector<S>& mu0,
    std::size_t grid_resolution,
    const std::vector<std::vector<S>>& extra_points = {}) {
  const std::size_t n = mu0.size();
  for (const auto& c : mu0)
    if (!(c > 0)) throw input_error("acquisition requires an interior prior");

  auto grid = simplex_grid<S>(n, grid_resolution);
  auto append_unique = [&](const std::vector<S>& p) {
    if (p.size() != n) throw input_error("extra grid point dimension mismatch");
    for (const auto& g : grid)
      if (acqdetail::same_belief(g.p, p)) return;
    grid.push_back(Belief<S>{p});
  };
  append_unique(mu0);
  for (const auto& p : extra_points) append_unique(p);

  LinearProgram<S> lp;
  lp.sense = Sense::Maximize;
  lp.objective.reserve(grid.size());
  for (const auto& g : grid)
    lp.objective.push_back(objective(g.p) - eval_potential(cost, g.p));
  for (std::size_t s = 0; s < n; ++s) {
    LPRow<S> row;
    row.coeffs.reserve(grid.size());
    for (const auto& g : grid) row.coeffs.push_back(g.p[s]);
    row.rel = Relation::Equal;
    row.rhs = mu0[s];
    lp.rows.push_back(std::move(row));
  }
  {
    LPRow<S> row;
    row.coeffs.assign(grid.size(), S{1});
    row.rel = Relation::Equal;
    row.rhs = S{1};
    lp.rows.push_back(std::move(row));
  }

  const auto res = solve_lp(lp);
  if (res.status != LPStatus::Optimal)
    throw numeric_error("acquisition linear program did not solve");

  AcquisitionSolution<S> out;
  out.lp_value = res.value;
  out.net_value = res.value + eval_potential(cost, mu0);
  out.grid = grid;
  out.row_duals = res.duals;

  // Duality residual: primal value minus the dual bound implied by the row
  // multipliers (zero when the certificate is exact).
  {
    S dual_bound{0};
    for (std::size_t r = 0; r < lp.rows.size(); ++r)
      dual_bound += res.duals[r] * lp.rows[r].rhs;
    out.dual_gap = abs_value(res.value - dual_bound);
  }

  std::vector<std::pair<Belief<S>, S>> support;
  S kept{0};
  const S threshold = acqdetail::support_threshold<S>();
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (res.solution[g] > threshold) {
      support.emplace_back(grid[g], res.solution[g]);
      kept += res.solution[g];
    }
  for (auto& [b, w] : support) w /= kept;
  out.distribution = make_distribution(std::move(support));
  return out;
}

template <typename S>
AcquisitionSolution<S> solve_acquisition(
    const DecisionProblem<S>& d, const UPSCost<S>& cost,
    const std::vector<S>& mu0, std::size_t grid_resolution,
    const std::vector<std::vector<S>>& extra_points = {}) {
  if (mu0.size() != d.num_states) throw input_error("belief dimension mismatch");
  return solve_acquisition_with(
      [&](const std::vector<S>& mu) { return value_at(d, mu); }, cost, mu0,
      grid_resolution, extra_points);
}

/// Whether p is a mean-preserving contraction of q: a nonnegative joint
/// matrix spreads each atom of p over atoms of q with matching barycenter.
template <typename S>
bool is_mpc(const PosteriorDistribution<S>& p, const PosteriorDistribution<S>& q) {
  const auto mp = p.mean();
  const auto mq = q.mean();
  if (mp.size() != mq.size())
    throw input_error("distributions over different state spaces");
  const S mean_tol = scalar_traits<S>::is_exact ? S{0} : S{1e-8};
  for (std::size_t s = 0; s < mp.size(); ++s)
    if (abs_value(mp[s] - mq[s]) > mean_tol)
      throw input_error("distributions have different means");

  const std::size_t P = p.support.size();
  const std::size_t Q = q.support.size();
  const std::size_t n = mp.size();
  LinearProgram<S> lp;
  lp.sense = Sense::Maximize;
  lp.objective.assign(P * Q, S{0});

  const S slack = scalar_traits<S>::is_exact ? S{0} : S{1e-8};
  auto add_relaxed = [&](std::vector<S> coeffs, S rhs) {
    if (slack == 0) {
      lp.rows.push_back({std::move(coeffs), Relation::Equal, rhs});
    } else {
      lp.rows.push_back({coeffs, Relation::LessEq, rhs + slack});
      lp.rows.push_back({std::move(coeffs), Relation::GreaterEq, rhs - slack});
    }
  };

  for (std::size_t x = 0; x < P; ++x) {
    std::vector<S> row(P * Q, S{0});
    for (std::size_t y = 0; y < Q; ++y) row[x * Q + y] = S{1};
    add_relaxed(std::move(row), p.support[x].second);
  }
  for (std::size_t y = 0; y < Q; ++y) {
    std::vector<S> row(P * Q, S{0});
    for (std::size_t x = 0; x < P; ++x) row[x * Q + y] = S{1};
    add_relaxed(std::move(row), q.support[y].second);
  }
  for (std::size_t x = 0; x < P; ++x)
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<S> row(P * Q, S{0});
      for (std::size_t y = 0; y < Q; ++y) row[x * Q + y] = q.support[y].first.p[s];
      add_relaxed(std::move(row),
                  p.support[x].second * p.support[x].first.p[s]);
    }
  return solve_lp(lp).status == LPStatus::Optimal;
}

template <typename S>
bool is_strict_mpc(const PosteriorDistribution<S>& p,
                   const PosteriorDistribution<S>& q) {
  return is_mpc(p, q) && !is_mpc(q, p);
}

/// Every support point sits in the interior of its own cell, one cell per
/// point: the distribution never mixes two posteriors that justify the same
/// action, nor posteriors of indifference.
template <typename S>
bool is_nonredundant(const DecisionProblem<S>& d,
                     const PosteriorDistribution<S>& phi) {
  const auto sub = subdivision(d);
  std::vector<std::size_t> cells;
  for (const auto& [b, w] : phi.support) {
    auto maxing = maximizing_cells(sub, b.p);
    if (maxing.size() != 1) return false;
    cells.push_back(maxing.front());
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    for (std::size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i] == cells[j]) return false;
  return true;
}

/// Builds a strictly convex max-of-paraboloids potential touching the value
/// function exactly on the support of phi, searching downward over the
/// curvature eps until a grid verification and a re-solved acquisition both
/// confirm the support is generated.
template <typename S>
UPSCost<S> synthesize_cost(const DecisionProblem<S>& d,
                           const PosteriorDistribution<S>& phi,
                           const std::vector<S>& mu0) {
  if (!is_nonredundant(d, phi))
    throw input_error("cost synthesis requires a non-redundant distribution");
  if (!plausible_for(phi, mu0))
    throw input_error("distribution is not Bayes-plausible for the prior");
  const std::size_t n = d.num_states;
  const auto sub = subdivision(d);

  // Piece index of each support point's cell.
  std::vector<std::size_t> cell_of;
  for (const auto& [b, w] : phi.support)
    cell_of.push_back(maximizing_cells(sub, b.p).front());

  const auto& anchor0 = phi.support.front().first.p;
  auto build = [&](const S& eps) {
    std::vector<ParaboloidPiece<S>> pieces;
    for (std::size_t i = 0; i < sub.cells.size(); ++i) {
      ParaboloidPiece<S> piece;
      piece.alpha = sub.cells[i].payoffs;
      piece.beta = S{0};
      piece.eps = eps;
      piece.anchor = anchor0;
      for (std::size_t k = 0; k < cell_of.size(); ++k)
        if (cell_of[k] == i) piece.anchor = phi.support[k].first.p;
      pieces.push_back(std::move(piece));
    }
    return make_paraboloid_cost(std::move(pieces));
  };

  std::vector<std::vector<S>> support_points;
  for (const auto& [b, w] : phi.support) support_points.push_back(b.p);

  const std::size_t resolution = default_grid_resolution(n);
  const S tol = scalar_traits<S>::strict_tolerance;
  const S match_radius = S(2) / S(static_cast<long>(resolution));

  // Contact at a support point survives as long as every other sheet stays
  // below the value there, which bounds the curvature in closed form; start
  // the search at half that bound.
  std::optional<S> eps_max;
  {
    const auto probe = build(S{1});
    for (std::size_t k = 0; k < phi.support.size(); ++k) {
      const auto& pt = phi.support[k].first.p;
      const S v_here = value_at(d, pt);
      for (std::size_t i = 0; i < sub.cells.size(); ++i) {
        if (i == cell_of[k]) continue;
        S dist2{0};
        for (std::size_t s = 0; s < n; ++s)
          dist2 += (pt[s] - probe.pieces[i].anchor[s]) *
                   (pt[s] - probe.pieces[i].anchor[s]);
        if (!(dist2 > 0)) continue;
        const S bound = (v_here - dot(sub.cells[i].payoffs, pt)) / dist2;
        if (!eps_max || bound < *eps_max) eps_max = bound;
      }
    }
  }
  S eps = eps_max ? *eps_max / 2 : S{1};
  if (!(eps > 0)) throw numeric_error("cost synthesis has no feasible curvature");
  for (int attempt = 0; attempt < 60; ++attempt, eps /= 2) {
    const auto cost = build(eps);

    bool ok = true;
    auto grid = simplex_grid<S>(n, resolution);
    for (const auto& g : grid)
      if (value_at(d, g.p) - eval_potential(cost, g.p) > tol) ok = false;
    for (const auto& pt : support_points)
      if (abs_value(value_at(d, pt) - eval_potential(cost, pt)) > tol)
        ok = false;
    if (!ok) continue;

    auto solved = solve_acquisition(d, cost, mu0, resolution, support_points);
    for (const auto& [b, w] : solved.distribution.support) {
      bool near = false;
      for (const auto& pt : support_points) {
        S dist2{0};
        for (std::size_t s = 0; s < n; ++s)
          dist2 += (b.p[s] - pt[s]) * (b.p[s] - pt[s]);
        if (dist2 <= match_radius * match_radius) near = true;
      }
      if (!near) ok = false;
    }
    if (ok) return cost;
  }
  throw numeric_error("cost synthesis exhausted the curvature search");
}

/// Output of the three-state incomparability construction: a prior, a cost,
/// and two binary acquisitions that are optimal for v and vhat respectively
/// yet Blackwell-incomparable.
template <typename S>
struct IncomparablePair {
  std::vector<S> prior;
  UPSCost<S> cost;
  PosteriorDistribution<S> phi_v;
  PosteriorDistribution<S> phi_vhat;
  DecisionProblem<S> shifted_v;
};

namespace acqdetail {

/// Strict interior test against the cell's halfspace rows.
template <typename S>
bool strictly_inside(const Polytope<S>& region, const std::vector<S>& mu) {
  const S tol = scalar_traits<S>::strict_tolerance;
  for (const auto& h : region.halfspaces())
    if (!(dot(h.normal, mu) < h.offset - tol)) return false;
  for (const auto& c : mu)
    if (!(c > tol)) return false;
  return true;
}

/// Crossing of segments a0-a1 and b0-b1 inside a plane slice of the
/// simplex; returns (s, t) with both in (0,1) when the crossing exists.
template <typename S>
std::optional<std::pair<S, S>> segment_crossing(const std::vector<S>& a0,
                                                const std::vector<S>& a1,
                                                const std::vector<S>& b0,
                                                const std::vector<S>& b1) {
  // Solve a0 + s (a1 - a0) = b0 + t (b1 - b0) using two coordinates with
  // a nonsingular 2x2 system, then verify the rest.
  const std::size_t n = a0.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const S a11 = a1[i] - a0[i], a12 = -(b1[i] - b0[i]);
      const S a21 = a1[j] - a0[j], a22 = -(b1[j] - b0[j]);
      const S det = a11 * a22 - a12 * a21;
      if (det == 0) continue;
      const S r1 = b0[i] - a0[i];
      const S r2 = b0[j] - a0[j];
      const S s = (r1 * a22 - a12 * r2) / det;
      const S t = (a11 * r2 - r1 * a21) / det;
      // Verify every coordinate, not just the two solved ones.
      for (std::size_t k = 0; k < n; ++k) {
        const S lhs = a0[k] + s * (a1[k] - a0[k]);
        const S rhs = b0[k] + t * (b1[k] - b0[k]);
        if (abs_value(lhs - rhs) > scalar_traits<S>::strict_tolerance)
          return std::nullopt;
      }
      const S margin = scalar_traits<S>::is_exact ? S{0} : S{1e-7};
      if (s <= margin || s >= S{1} - margin) return std::nullopt;
      if (t <= margin || t >= S{1} - margin) return std::nullopt;
      return std::make_pair(s, t);
    }
  return std::nullopt;
}

}  // namespace acqdetail

template <typename S>
IncomparablePair<S> incomparable_pair_construction(
    const DecisionProblem<S>& d, const DecisionProblem<S>& dhat) {
  const std::size_t n = d.num_states;
  if (n < 3)
    throw inapplicable_error(
        "incomparability construction needs at least 3 states");
  if (dhat.num_states != n)
    throw input_error("problems over different state spaces");
  if (subdivision(d).cells.size() < 2)
    throw inapplicable_error("original value function is affine");
  {
    const auto w = difference_function(dhat, d);
    bool affine = true;
    const auto& first = w.pieces.front().w;
    for (const auto& p : w.pieces) {
      // Compare centered forms: two linear forms agree on the simplex iff
      // their mean-centered coefficient vectors agree.
      S mean_a{0}, mean_b{0};
      for (std::size_t s = 0; s < n; ++s) {
        mean_a += first[s];
        mean_b += p.w[s];
      }
      for (std::size_t s = 0; s < n; ++s)
        if (abs_value((first[s] - mean_a / S(static_cast<long>(n))) -
                      (p.w[s] - mean_b / S(static_cast<long>(n)))) >
            scalar_traits<S>::merge_tolerance)
          affine = false;
    }
    if (affine)
      throw inapplicable_error("value-function difference is affine");
  }

  // Shift v by the affine interpolant of vhat - v at the simplex vertices,
  // minus delta: the shifted value function ties vhat at no vertex and the
  // sign of (shifted v - vhat) partitions the simplex into the two regions
  // the construction needs.  The shift leaves acquisition solutions for v
  // untouched because it changes the objective by a constant at any fixed
  // prior.
  std::vector<S> h(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<S> e(n, S{0});
    e[s] = S{1};
    h[s] = value_at(dhat, e) - value_at(d, e);
  }
  // Gap maximum of (v + h) - vhat over refinement vertices.
  S gmax{0};
  {
    const auto ref = common_refinement(subdivision(d), subdivision(dhat));
    for (const auto& cell : ref.cells)
      for (const auto& v : cell.region.vertices()) {
        const S g = value_at(d, v.p) + dot(h, v.p) - value_at(dhat, v.p);
        if (g > gmax) gmax = g;
      }
  }
  if (!(gmax > 0))
    throw inapplicable_error("shifted value function never exceeds vhat");

  for (S delta = gmax / 2; delta > gmax / 1024; delta /= 2) {
    DecisionProblem<S> shifted = d;
    for (auto& a : shifted.actions)
      for (std::size_t s = 0; s < n; ++s) a.payoffs[s] += h[s] - delta;

    // Union problem whose value is max(shifted v, vhat).
    std::vector<Action<S>> merged;
    for (const auto& a : shifted.actions)
      merged.push_back({"v:" + a.label, a.payoffs});
    for (const auto& a : dhat.actions)
      merged.push_back({"w:" + a.label, a.payoffs});
    auto tilde = make_problem<S>(n, std::move(merged));
    auto sub_tilde = subdivision(tilde);

    // Candidate interior points per cell, classified by which side owns the
    // piece there (strictly, to stay inside Y or Z).
    struct Candidate {
      std::size_t cell;
      std::vector<S> point;
    };
    std::vector<Candidate> v_side, w_side;
    for (std::size_t i = 0; i < sub_tilde.cells.size(); ++i) {
      const auto& cell = sub_tilde.cells[i];
      std::vector<std::vector<S>> points;
      auto center = cell.region.interior_point();
      points.push_back(center);
      for (const auto& vert : cell.region.vertices()) {
        std::vector<S> pulled(n);
        for (std::size_t s = 0; s < n; ++s)
          pulled[s] = (center[s] + vert.p[s] * 3) / 4;
        points.push_back(std::move(pulled));
      }
      for (auto& pt : points) {
        if (!acqdetail::strictly_inside(cell.region, pt)) continue;
        const S side = value_at(shifted, pt) - value_at(dhat, pt);
        if (side > scalar_traits<S>::strict_tolerance)
          v_side.push_back({i, pt});
        else if (side < -scalar_traits<S>::strict_tolerance)
          w_side.push_back({i, pt});
      }
    }

    for (const auto& z1 : v_side)
      for (const auto& z2 : v_side) {
        if (z1.cell >= z2.cell) continue;
        for (const auto& y1 : w_side)
          for (const auto& y2 : w_side) {
            if (y1.cell >= y2.cell) continue;
            auto cross = acqdetail::segment_crossing(z1.point, z2.point,
                                                     y1.point, y2.point);
            if (!cross) continue;
            const auto [s, t] = *cross;
            std::vector<S> prior(n);
            for (std::size_t k = 0; k < n; ++k)
              prior[k] = z1.point[k] + s * (z2.point[k] - z1.point[k]);
            bool interior = true;
            for (const auto& c : prior)
              if (!(c > scalar_traits<S>::strict_tolerance)) interior = false;
            if (!interior) continue;

            auto phi4 = make_distribution<S>(
                {{Belief<S>{z1.point}, (S{1} - s) / 2},
                 {Belief<S>{z2.point}, s / 2},
                 {Belief<S>{y1.point}, (S{1} - t) / 2},
                 {Belief<S>{y2.point}, t / 2}});
            if (!is_nonredundant(tilde, phi4)) continue;

            UPSCost<S> cost;
            try {
              cost = synthesize_cost(tilde, phi4, prior);
            } catch (const numeric_error&) {
              continue;
            }

            auto phi_v = make_distribution<S>({{Belief<S>{z1.point}, S{1} - s},
                                               {Belief<S>{z2.point}, s}});
            auto phi_w = make_distribution<S>({{Belief<S>{y1.point}, S{1} - t},
                                               {Belief<S>{y2.point}, t}});
            if (is_mpc(phi_v, phi_w) || is_mpc(phi_w, phi_v)) continue;

            IncomparablePair<S> out{prior, std::move(cost), std::move(phi_v),
                                    std::move(phi_w), std::move(shifted)};
            return out;
          }
      }
  }
  throw numeric_error("incomparability construction found no crossing");
}

}  // namespace infoval
