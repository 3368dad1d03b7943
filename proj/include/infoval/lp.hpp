#pragma once

#include "infoval/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace infoval {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Maximize, Minimize };
enum class LPStatus { Optimal, Infeasible, Unbounded };

template <typename S>
struct LPRow {
  std::vector<S> coeffs;
  Relation rel = Relation::LessEq;
  S rhs{0};
};

/// Variable box.  Default is the nonnegative orthant; callers open a side
/// with std::nullopt.
template <typename S>
struct VarBounds {
  std::optional<S> lower = S{0};
  std::optional<S> upper = std::nullopt;
  static VarBounds free_var() { return {std::nullopt, std::nullopt}; }
  static VarBounds interval(S lo, S hi) {
    return {std::move(lo), std::move(hi)};
  }
};

/// Infeasibility witness over the original rows: multipliers y (sign-matched
/// to each row's relation) plus box multipliers p (upper bounds) and q (lower
/// bounds) with  y.A_j - p_j + q_j = 0  for every variable j and
/// y.b - sum_j (p_j hi_j - q_j lo_j) > 0.  Substituting any point in the box
/// that satisfies the rows then yields a contradiction.
template <typename S>
struct FarkasCertificate {
  std::vector<S> row_multipliers;
  std::vector<S> upper_multipliers;
  std::vector<S> lower_multipliers;
};

template <typename S>
struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  std::vector<S> solution;
  S value{0};
  /// Row duals in original space (populated when Optimal).
  std::vector<S> duals;
  std::optional<FarkasCertificate<S>> farkas;
  std::size_t iterations = 0;
};

template <typename S>
struct LinearProgram {
  Sense sense = Sense::Maximize;
  std::vector<S> objective;
  std::vector<LPRow<S>> rows;
  /// Empty means every variable uses the default bounds.
  std::vector<VarBounds<S>> bounds;

  std::size_t num_vars() const { return objective.size(); }
  VarBounds<S> bound(std::size_t j) const {
    return bounds.empty() ? VarBounds<S>{} : bounds.at(j);
  }
};

namespace lpdetail {

template <typename S>
inline S pivot_eps() {
  if constexpr (scalar_traits<S>::is_exact) {
    return S{0};
  } else {
    return S{1e-11};
  }
}

template <typename S>
inline S feas_eps() {
  if constexpr (scalar_traits<S>::is_exact) {
    return S{0};
  } else {
    return S{1e-9};
  }
}

template <typename S>
LPResult<S> solve_impl(const LinearProgram<S>& lp, bool want_farkas);

}  // namespace lpdetail

/// Two-phase dense simplex with Bland's rule in both arithmetic modes.
/// Degenerate and empty inputs yield Infeasible, never an exception; the
/// iteration budget guard throws numeric_error only on runaway float cycling.
template <typename S>
LPResult<S> solve_lp(const LinearProgram<S>& lp) {
  return lpdetail::solve_impl(lp, true);
}

/// Substitution check of an Optimal result: primal feasibility, dual sign
/// conditions, bounded reduced costs, and the strong-duality value match.
template <typename S>
bool verify_optimality(const LinearProgram<S>& lp, const LPResult<S>& res,
                       const S& tol = lpdetail::feas_eps<S>());

/// Substitution check of a Farkas certificate against the original system.
template <typename S>
bool verify_farkas(const LinearProgram<S>& lp, const FarkasCertificate<S>& cert,
                   const S& tol = lpdetail::feas_eps<S>());

// ---------------------------------------------------------------------------
// implementation
// ---------------------------------------------------------------------------

namespace lpdetail {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

template <typename S>
struct StructCol {
  std::size_t var;
  int sign;
  S shift;
};

template <typename S>
struct StdProblem {
  std::vector<StructCol<S>> cols;            // structural columns
  std::vector<std::vector<std::size_t>> var_cols;
  std::vector<std::vector<S>> rows;          // coefficients over structural
  std::vector<S> rhs;
  std::vector<Relation> rels;
  std::vector<int> sigma;                    // +-1 vs original row, 0 = bound row
  std::vector<std::size_t> origin;           // original row index or npos
};

template <typename S>
StdProblem<S> build_standard(const LinearProgram<S>& lp) {
  StdProblem<S> sp;
  const std::size_t nv = lp.num_vars();
  sp.var_cols.resize(nv);

  struct BoundRow {
    std::size_t col;
    S rhs;
  };
  std::vector<BoundRow> bound_rows;

  for (std::size_t j = 0; j < nv; ++j) {
    const auto b = lp.bound(j);
    if (b.lower) {
      sp.var_cols[j].push_back(sp.cols.size());
      sp.cols.push_back({j, +1, *b.lower});
      if (b.upper) bound_rows.push_back({sp.cols.size() - 1, *b.upper - *b.lower});
    } else if (b.upper) {
      sp.var_cols[j].push_back(sp.cols.size());
      sp.cols.push_back({j, -1, *b.upper});
    } else {
      sp.var_cols[j].push_back(sp.cols.size());
      sp.cols.push_back({j, +1, S{0}});
      sp.var_cols[j].push_back(sp.cols.size());
      sp.cols.push_back({j, -1, S{0}});
    }
  }

  auto push_row = [&](std::vector<S> coeffs, Relation rel, S rhs, int sig,
                      std::size_t orig) {
    if (rhs < 0) {
      for (auto& v : coeffs) v = -v;
      rhs = -rhs;
      sig = -sig;
      if (rel == Relation::LessEq)
        rel = Relation::GreaterEq;
      else if (rel == Relation::GreaterEq)
        rel = Relation::LessEq;
    }
    sp.rows.push_back(std::move(coeffs));
    sp.rhs.push_back(std::move(rhs));
    sp.rels.push_back(rel);
    sp.sigma.push_back(sig);
    sp.origin.push_back(orig);
  };

  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    if (row.coeffs.size() != nv)
      throw input_error("LP row width does not match variable count");
    // Substitution x_j = sum_c sign_c y_c + sum_c shift_c (free splits carry
    // shift 0, single columns exactly one shift).
    std::vector<S> coeffs(sp.cols.size(), S{0});
    S rhs = row.rhs;
    for (std::size_t j = 0; j < nv; ++j) {
      if (row.coeffs[j] == 0) continue;
      for (auto c : sp.var_cols[j]) {
        coeffs[c] += row.coeffs[j] * S(sp.cols[c].sign);
        rhs -= row.coeffs[j] * sp.cols[c].shift;
      }
    }
    push_row(std::move(coeffs), row.rel, std::move(rhs), +1, r);
  }
  for (const auto& br : bound_rows) {
    std::vector<S> coeffs(sp.cols.size(), S{0});
    coeffs[br.col] = S{1};
    push_row(std::move(coeffs), Relation::LessEq, br.rhs, 0, npos);
  }
  return sp;
}

/// Dense tableau over structural + slack/surplus + artificial columns.
template <typename S>
struct Tableau {
  std::vector<std::vector<S>> a;   // m x n
  std::vector<S> b;                // m
  std::vector<std::size_t> basis;  // m
  std::vector<char> is_basic;      // n
  std::vector<char> is_artificial; // n
  std::vector<std::size_t> unit_col;  // per row: its slack or artificial
  std::size_t ncols = 0;

  std::size_t m() const { return a.size(); }
  std::size_t n() const { return ncols; }

  void pivot(std::size_t r, std::size_t c) {
    const S p = a[r][c];
    for (auto& v : a[r]) v /= p;
    b[r] /= p;
    for (std::size_t i = 0; i < m(); ++i) {
      if (i == r) continue;
      const S f = a[i][c];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n(); ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    is_basic[basis[r]] = 0;
    basis[r] = c;
    is_basic[c] = 1;
  }

  /// Bland-rule maximization of cost over the tableau.  With
  /// ban_artificials set (phase 2), artificial columns never re-enter.
  /// Returns false iff unbounded above.
  bool maximize(const std::vector<S>& cost, std::size_t& budget,
                bool ban_artificials) {
    const S eps = pivot_eps<S>();
    while (true) {
      if (budget == 0) throw numeric_error("simplex iteration budget exhausted");
      std::size_t entering = n();
      for (std::size_t j = 0; j < n(); ++j) {
        if (is_basic[j] || (ban_artificials && is_artificial[j])) continue;
        S reduced = cost[j];
        for (std::size_t i = 0; i < m(); ++i) {
          const S cb = cost[basis[i]];
          if (cb != 0) reduced -= cb * a[i][j];
        }
        if (reduced > eps) {
          entering = j;
          break;
        }
      }
      if (entering == n()) return true;

      std::size_t leave = m();
      for (std::size_t i = 0; i < m(); ++i) {
        if (a[i][entering] <= eps) continue;
        if (leave == m()) {
          leave = i;
          continue;
        }
        const S lhs = b[i] * a[leave][entering];
        const S rhs = b[leave] * a[i][entering];
        if (lhs < rhs || (lhs == rhs && basis[i] < basis[leave])) leave = i;
      }
      if (leave == m()) return false;
      pivot(leave, entering);
      --budget;
    }
  }
};

template <typename S>
Tableau<S> assemble(const StdProblem<S>& sp) {
  Tableau<S> t;
  const std::size_t m = sp.rows.size();
  std::size_t extra = 0;
  for (auto rel : sp.rels) extra += rel == Relation::GreaterEq ? 2 : 1;
  const std::size_t n = sp.cols.size() + extra;
  t.ncols = n;

  t.a.assign(m, std::vector<S>(n, S{0}));
  t.b = sp.rhs;
  t.basis.assign(m, 0);
  t.is_basic.assign(n, 0);
  t.is_artificial.assign(n, 0);
  t.unit_col.assign(m, 0);

  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < sp.cols.size(); ++j) t.a[i][j] = sp.rows[i][j];

  std::size_t next = sp.cols.size();
  for (std::size_t i = 0; i < m; ++i) {
    switch (sp.rels[i]) {
      case Relation::LessEq:
        t.a[i][next] = S{1};
        t.unit_col[i] = next;
        t.basis[i] = next;
        ++next;
        break;
      case Relation::GreaterEq:
        t.a[i][next] = S{-1};
        ++next;
        t.a[i][next] = S{1};
        t.is_artificial[next] = 1;
        t.unit_col[i] = next;
        t.basis[i] = next;
        ++next;
        break;
      case Relation::Equal:
        t.a[i][next] = S{1};
        t.is_artificial[next] = 1;
        t.unit_col[i] = next;
        t.basis[i] = next;
        ++next;
        break;
    }
  }
  for (auto bcol : t.basis) t.is_basic[bcol] = 1;
  return t;
}

template <typename S>
FarkasCertificate<S> farkas_from_aux(const LinearProgram<S>& lp);

template <typename S>
LPResult<S> solve_impl(const LinearProgram<S>& lp, bool want_farkas) {
  LPResult<S> out;
  const std::size_t nv = lp.num_vars();
  if (nv == 0) return out;  // Infeasible by convention
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != nv)
      throw input_error("LP row width does not match variable count");
  if (!lp.bounds.empty() && lp.bounds.size() != nv)
    throw input_error("LP bounds length does not match variable count");

  auto sp = build_standard(lp);
  auto t = assemble(sp);
  std::size_t budget = 200000;

  // Phase 1: drive artificials to zero.
  {
    std::vector<S> cost(t.n(), S{0});
    bool any = false;
    for (std::size_t j = 0; j < t.n(); ++j)
      if (t.is_artificial[j]) {
        cost[j] = S{-1};
        any = true;
      }
    if (any) {
      t.maximize(cost, budget, false);
      S art_sum{0};
      for (std::size_t i = 0; i < t.m(); ++i)
        if (t.is_artificial[t.basis[i]]) art_sum += t.b[i];
      if (art_sum > feas_eps<S>()) {
        out.status = LPStatus::Infeasible;
        if (want_farkas) {
          try {
            out.farkas = farkas_from_aux(lp);
          } catch (const std::exception&) {
            out.farkas.reset();
          }
        }
        out.iterations = 200000 - budget;
        return out;
      }
    }
  }

  // Phase 2.
  std::vector<S> cost(t.n(), S{0});
  for (std::size_t c = 0; c < sp.cols.size(); ++c) {
    const S cj = lp.objective[sp.cols[c].var] * S(sp.cols[c].sign);
    cost[c] = lp.sense == Sense::Maximize ? cj : -cj;
  }
  const bool bounded = t.maximize(cost, budget, true);
  out.iterations = 200000 - budget;
  if (!bounded) {
    out.status = LPStatus::Unbounded;
    return out;
  }

  // Primal solution in original variables.
  out.solution.assign(nv, S{0});
  std::vector<S> ystruct(sp.cols.size(), S{0});
  for (std::size_t i = 0; i < t.m(); ++i)
    if (t.basis[i] < sp.cols.size()) ystruct[t.basis[i]] = t.b[i];
  for (std::size_t j = 0; j < nv; ++j) {
    S x{0};
    for (auto c : sp.var_cols[j]) x += S(sp.cols[c].sign) * ystruct[c] + sp.cols[c].shift;
    out.solution[j] = x;
  }
  out.value = S{0};
  for (std::size_t j = 0; j < nv; ++j)
    out.value += lp.objective[j] * out.solution[j];

  // Row duals: y_i = cost_B . B^{-1} e_i read via each row's unit column,
  // then mapped back through row normalization sign and sense.
  out.duals.assign(lp.rows.size(), S{0});
  for (std::size_t i = 0; i < t.m(); ++i) {
    if (sp.origin[i] == npos) continue;
    S y{0};
    const std::size_t uc = t.unit_col[i];
    for (std::size_t k = 0; k < t.m(); ++k) {
      const S cb = cost[t.basis[k]];
      if (cb != 0) y += cb * t.a[k][uc];
    }
    y *= S(sp.sigma[i]);
    if (lp.sense == Sense::Minimize) y = -y;
    out.duals[sp.origin[i]] = y;
  }

  out.status = LPStatus::Optimal;
  return out;
}

/// Farkas witness via an auxiliary cone program in original row space.
template <typename S>
FarkasCertificate<S> farkas_from_aux(const LinearProgram<S>& lp) {
  const std::size_t nr = lp.rows.size();
  const std::size_t nv = lp.num_vars();
  // Variables: y_0..y_{nr-1}, p_0..p_{nv-1}, q_0..q_{nv-1}, t.
  LinearProgram<S> aux;
  aux.sense = Sense::Maximize;
  const std::size_t total = nr + 2 * nv + 1;
  aux.objective.assign(total, S{0});
  aux.objective[total - 1] = S{1};
  aux.bounds.assign(total, VarBounds<S>{});
  for (std::size_t i = 0; i < nr; ++i) {
    switch (lp.rows[i].rel) {
      case Relation::GreaterEq:
        aux.bounds[i] = {S{0}, std::nullopt};
        break;
      case Relation::LessEq:
        aux.bounds[i] = {std::nullopt, S{0}};
        break;
      case Relation::Equal:
        aux.bounds[i] = VarBounds<S>::free_var();
        break;
    }
  }
  for (std::size_t j = 0; j < nv; ++j) {
    const auto b = lp.bound(j);
    aux.bounds[nr + j] = b.upper ? VarBounds<S>{S{0}, std::nullopt}
                                 : VarBounds<S>{S{0}, S{0}};
    aux.bounds[nr + nv + j] = b.lower ? VarBounds<S>{S{0}, std::nullopt}
                                      : VarBounds<S>{S{0}, S{0}};
  }
  aux.bounds[total - 1] = {std::nullopt, S{1}};

  // y.A_j - p_j + q_j = 0 per variable.
  for (std::size_t j = 0; j < nv; ++j) {
    LPRow<S> row;
    row.coeffs.assign(total, S{0});
    for (std::size_t i = 0; i < nr; ++i) row.coeffs[i] = lp.rows[i].coeffs[j];
    row.coeffs[nr + j] = S{-1};
    row.coeffs[nr + nv + j] = S{1};
    row.rel = Relation::Equal;
    row.rhs = S{0};
    aux.rows.push_back(std::move(row));
  }
  // t - y.b + sum_j (p_j hi_j - q_j lo_j) <= 0.
  {
    LPRow<S> row;
    row.coeffs.assign(total, S{0});
    for (std::size_t i = 0; i < nr; ++i) row.coeffs[i] = -lp.rows[i].rhs;
    for (std::size_t j = 0; j < nv; ++j) {
      const auto b = lp.bound(j);
      if (b.upper) row.coeffs[nr + j] = *b.upper;
      if (b.lower) row.coeffs[nr + nv + j] = -*b.lower;
    }
    row.coeffs[total - 1] = S{1};
    row.rel = Relation::LessEq;
    row.rhs = S{0};
    aux.rows.push_back(std::move(row));
  }

  const auto res = solve_impl(aux, false);
  if (res.status != LPStatus::Optimal || !(res.value > feas_eps<S>()))
    throw numeric_error("failed to certify infeasibility");
  FarkasCertificate<S> cert;
  cert.row_multipliers.assign(res.solution.begin(), res.solution.begin() + nr);
  cert.upper_multipliers.assign(res.solution.begin() + nr,
                                res.solution.begin() + nr + nv);
  cert.lower_multipliers.assign(res.solution.begin() + nr + nv,
                                res.solution.begin() + nr + 2 * nv);
  return cert;
}

}  // namespace lpdetail

template <typename S>
bool verify_optimality(const LinearProgram<S>& lp, const LPResult<S>& res,
                       const S& tol) {
  if (res.status != LPStatus::Optimal) return false;
  const std::size_t nv = lp.num_vars();
  if (res.solution.size() != nv || res.duals.size() != lp.rows.size())
    return false;

  // Primal feasibility.
  for (std::size_t j = 0; j < nv; ++j) {
    const auto b = lp.bound(j);
    if (b.lower && res.solution[j] < *b.lower - tol) return false;
    if (b.upper && res.solution[j] > *b.upper + tol) return false;
  }
  for (const auto& row : lp.rows) {
    S lhs{0};
    for (std::size_t j = 0; j < nv; ++j) lhs += row.coeffs[j] * res.solution[j];
    if (row.rel == Relation::LessEq && lhs > row.rhs + tol) return false;
    if (row.rel == Relation::GreaterEq && lhs < row.rhs - tol) return false;
    if (row.rel == Relation::Equal && abs_value(lhs - row.rhs) > tol) return false;
  }

  // Reduce to the Maximize conventions.
  const S flip = lp.sense == Sense::Maximize ? S{1} : S{-1};
  // Dual sign conditions.
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const S y = flip * res.duals[i];
    if (lp.rows[i].rel == Relation::LessEq && y < -tol) return false;
    if (lp.rows[i].rel == Relation::GreaterEq && y > tol) return false;
  }
  // Reduced costs and strong duality.
  S dual_value{0};
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    dual_value += flip * res.duals[i] * lp.rows[i].rhs;
  for (std::size_t j = 0; j < nv; ++j) {
    S d = flip * lp.objective[j];
    for (std::size_t i = 0; i < lp.rows.size(); ++i)
      d -= flip * res.duals[i] * lp.rows[i].coeffs[j];
    const auto b = lp.bound(j);
    if (d > tol) {
      if (!b.upper) return false;
      dual_value += d * *b.upper;
    } else if (d < -tol) {
      if (!b.lower) return false;
      dual_value += d * *b.lower;
    }
  }
  return abs_value(dual_value - flip * res.value) <=
         tol * S{100} + tol;  // strong duality
}

template <typename S>
bool verify_farkas(const LinearProgram<S>& lp, const FarkasCertificate<S>& cert,
                   const S& tol) {
  const std::size_t nr = lp.rows.size();
  const std::size_t nv = lp.num_vars();
  if (cert.row_multipliers.size() != nr || cert.upper_multipliers.size() != nv ||
      cert.lower_multipliers.size() != nv)
    return false;
  for (std::size_t i = 0; i < nr; ++i) {
    const S& y = cert.row_multipliers[i];
    if (lp.rows[i].rel == Relation::GreaterEq && y < -tol) return false;
    if (lp.rows[i].rel == Relation::LessEq && y > tol) return false;
  }
  S gap{0};
  for (std::size_t i = 0; i < nr; ++i)
    gap += cert.row_multipliers[i] * lp.rows[i].rhs;
  for (std::size_t j = 0; j < nv; ++j) {
    const auto b = lp.bound(j);
    const S& p = cert.upper_multipliers[j];
    const S& q = cert.lower_multipliers[j];
    if (p < -tol || q < -tol) return false;
    if (p > tol && !b.upper) return false;
    if (q > tol && !b.lower) return false;
    S colsum = -p + q;
    for (std::size_t i = 0; i < nr; ++i)
      colsum += cert.row_multipliers[i] * lp.rows[i].coeffs[j];
    if (abs_value(colsum) > tol) return false;
    if (b.upper) gap -= p * *b.upper;
    if (b.lower) gap += q * *b.lower;
  }
  return gap > tol;
}

}  // namespace infoval
