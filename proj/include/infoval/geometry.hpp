#pragma once

#include "infoval/lp.hpp"
#include "infoval/scalar.hpp"

#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace infoval {

/// Probability vector over the full state list (no chart coordinates).
template <typename S>
struct Belief {
  std::vector<S> p;

  std::size_t size() const { return p.size(); }
  const S& operator[](std::size_t i) const { return p[i]; }
};

/// Validates nonnegativity and unit sum (exactly in exact mode, within 1e-12
/// in float mode) and returns the belief.
template <typename S>
Belief<S> make_belief(std::vector<S> coords) {
  if (coords.empty()) throw input_error("belief over zero states");
  S sum{0};
  for (const auto& c : coords) {
    if constexpr (scalar_traits<S>::is_exact) {
      if (c < 0) throw input_error("belief coordinate is negative");
    } else {
      if (c < -1e-12) throw input_error("belief coordinate is negative");
    }
    sum += c;
  }
  if constexpr (scalar_traits<S>::is_exact) {
    if (sum != 1) throw input_error("belief does not sum to 1");
  } else {
    if (abs_value(sum - 1.0) > 1e-12) throw input_error("belief does not sum to 1");
  }
  return Belief<S>{std::move(coords)};
}

/// Closed halfspace normal.mu <= offset, always read jointly with the
/// simplex (sum mu = 1, mu >= 0).
template <typename S>
struct Halfspace {
  std::vector<S> normal;
  S offset{0};
};

/// Convex polytope in H-representation, implicitly intersected with the
/// belief simplex.  On construction every normal is centered against the
/// all-ones direction (which is invisible on the simplex), so trivial and
/// contradictory rows are recognized exactly.
template <typename S>
class Polytope {
 public:
  Polytope(std::size_t num_states, std::vector<Halfspace<S>> halfspaces)
      : n_(num_states) {
    if (n_ == 0) throw input_error("polytope over zero states");
    for (auto& h : halfspaces) {
      if (h.normal.size() != n_)
        throw input_error("halfspace dimension mismatch");
      S mean{0};
      for (const auto& v : h.normal) mean += v;
      mean /= S(static_cast<long>(n_));
      bool all_zero = true;
      for (auto& v : h.normal) {
        v -= mean;
        if (v != 0) all_zero = false;
      }
      h.offset -= mean;
      if (all_zero) {
        if (h.offset < 0) trivially_empty_ = true;
        continue;  // vacuous on the simplex either way
      }
      rows_.push_back(std::move(h));
    }
  }

  static Polytope simplex(std::size_t num_states) {
    return Polytope(num_states, {});
  }

  std::size_t num_states() const { return n_; }
  const std::vector<Halfspace<S>>& halfspaces() const { return rows_; }
  bool trivially_empty() const { return trivially_empty_; }

  Polytope(const Polytope& other) : n_(other.n_), rows_(other.rows_),
                                    trivially_empty_(other.trivially_empty_) {
    std::lock_guard<std::mutex> lk(other.cache_mu_);
    cache_ = other.cache_;
  }
  Polytope& operator=(const Polytope& other) {
    if (this == &other) return *this;
    std::shared_ptr<const std::vector<Belief<S>>> snap;
    {
      std::lock_guard<std::mutex> lk(other.cache_mu_);
      snap = other.cache_;
    }
    std::lock_guard<std::mutex> lk(cache_mu_);
    n_ = other.n_;
    rows_ = other.rows_;
    trivially_empty_ = other.trivially_empty_;
    cache_ = std::move(snap);
    return *this;
  }

  /// All vertices of the polytope (intersected with the simplex), by
  /// exhaustive basis enumeration.  Cached; safe for concurrent readers.
  const std::vector<Belief<S>>& vertices() const {
    std::lock_guard<std::mutex> lk(cache_mu_);
    if (!cache_)
      cache_ = std::make_shared<const std::vector<Belief<S>>>(enumerate());
    return *cache_;
  }

  bool is_empty() const { return vertices().empty(); }

  bool contains_point(const std::vector<S>& mu) const {
    if (trivially_empty_) return false;
    const S tol = scalar_traits<S>::strict_tolerance;
    for (const auto& h : rows_)
      if (dot(h.normal, mu) > h.offset + tol) return false;
    return true;
  }

  /// Every vertex of `inner` satisfies this polytope's halfspaces; an empty
  /// `inner` is vacuously contained.
  bool contains(const Polytope& inner) const {
    if (trivially_empty_) return inner.is_empty();
    for (const auto& v : inner.vertices())
      if (!contains_point(v.p)) return false;
    return true;
  }

  static Polytope intersect(const Polytope& a, const Polytope& b) {
    if (a.n_ != b.n_) throw input_error("intersecting polytopes of different dimension");
    std::vector<Halfspace<S>> rows = a.rows_;
    rows.insert(rows.end(), b.rows_.begin(), b.rows_.end());
    Polytope res(a.n_, std::move(rows));
    res.trivially_empty_ = res.trivially_empty_ || a.trivially_empty_ || b.trivially_empty_;
    return res;
  }

  /// Mean of the vertices: a relative-interior point of the vertex hull.
  std::vector<S> interior_point() const {
    const auto& vs = vertices();
    if (vs.empty()) throw inapplicable_error("interior point of empty polytope");
    std::vector<S> mu(n_, S{0});
    for (const auto& v : vs)
      for (std::size_t i = 0; i < n_; ++i) mu[i] += v.p[i];
    for (auto& c : mu) c /= S(static_cast<long>(vs.size()));
    return mu;
  }

 private:
  std::vector<Belief<S>> enumerate() const;

  std::size_t n_;
  std::vector<Halfspace<S>> rows_;
  bool trivially_empty_ = false;
  mutable std::mutex cache_mu_;
  mutable std::shared_ptr<const std::vector<Belief<S>>> cache_;
};

namespace geodetail {

/// Gaussian elimination with max-|pivot| selection; returns false when the
/// system is singular.
template <typename S>
bool solve_square(std::vector<std::vector<S>> a, std::vector<S> b,
                  std::vector<S>& out) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs_value(a[r][col]) > abs_value(a[best][col])) best = r;
    if (a[best][col] == 0) return false;
    std::swap(a[best], a[col]);
    std::swap(b[best], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const S f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, S{0});
  for (std::size_t i = 0; i < n; ++i) out[i] = b[i] / a[i][i];
  return true;
}

/// Advances a lexicographic k-subset of {0..m-1}; false once exhausted.
inline bool next_subset(std::vector<std::size_t>& idx, std::size_t m) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] != m - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace geodetail

template <typename S>
std::vector<Belief<S>> Polytope<S>::enumerate() const {
  if (trivially_empty_) return {};
  if (n_ > 4) throw input_error("vertex enumeration supports at most 4 states");
  if (rows_.size() > 64)
    throw input_error("vertex enumeration supports at most 64 halfspaces");

  // Inequality pool: n coordinate rows (mu_i >= 0) then the halfspaces
  // (normal.mu <= offset).  A vertex activates n-1 of them plus the simplex
  // equality.
  const std::size_t pool = n_ + rows_.size();
  const std::size_t k = n_ - 1;
  const S tol = scalar_traits<S>::strict_tolerance;

  std::vector<Belief<S>> found;
  auto accept = [&](const std::vector<S>& mu) {
    for (const auto& c : mu)
      if (c < -tol) return;
    for (const auto& h : rows_)
      if (dot(h.normal, mu) > h.offset + tol) return;
    for (const auto& v : found) {
      if constexpr (scalar_traits<S>::is_exact) {
        if (v.p == mu) return;
      } else {
        S dist2{0};
        for (std::size_t i = 0; i < n_; ++i)
          dist2 += (v.p[i] - mu[i]) * (v.p[i] - mu[i]);
        if (dist2 < scalar_traits<S>::merge_tolerance *
                        scalar_traits<S>::merge_tolerance)
          return;
      }
    }
    found.push_back(Belief<S>{mu});
  };

  if (k == 0) {
    // One state: the single point (1).
    std::vector<S> mu{S{1}};
    accept(mu);
    return found;
  }

  if (pool < k) return {};
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<std::vector<S>> a;
    std::vector<S> b;
    a.emplace_back(n_, S{1});  // sum mu = 1
    b.push_back(S{1});
    for (auto ci : idx) {
      if (ci < n_) {
        std::vector<S> row(n_, S{0});
        row[ci] = S{1};
        a.push_back(std::move(row));
        b.push_back(S{0});
      } else {
        a.push_back(rows_[ci - n_].normal);
        b.push_back(rows_[ci - n_].offset);
      }
    }
    std::vector<S> mu;
    if (geodetail::solve_square(a, b, mu)) accept(mu);
    if (!geodetail::next_subset(idx, pool)) break;
  }
  return found;
}

/// Result of a strict-satisfiability query: the LP maximizes the minimum
/// slack t of the strict rows over the domain, so `margin` reports how
/// strictly the witness clears them.
template <typename S>
struct StrictFeasibility {
  bool feasible = false;
  std::vector<S> witness;
  S margin{0};
};

/// Decides whether some mu in `domain` satisfies every row a.mu >= b, with
/// strict inequality on rows flagged in `strict_mask`.  This is the single
/// place the float strict tolerance (1e-9) is applied; every strict
/// comparison in the library routes through here or through
/// scalar_traits::strict_tolerance directly.
template <typename S>
StrictFeasibility<S> strict_feasibility(
    const std::vector<std::pair<std::vector<S>, S>>& rows,
    const std::vector<char>& strict_mask, const Polytope<S>& domain) {
  if (rows.size() != strict_mask.size())
    throw input_error("strict_feasibility: mask length mismatch");
  if (domain.trivially_empty()) return {};
  const std::size_t n = domain.num_states();

  LinearProgram<S> lp;
  lp.sense = Sense::Maximize;
  lp.objective.assign(n + 1, S{0});
  lp.objective[n] = S{1};
  lp.bounds.assign(n + 1, VarBounds<S>{});
  lp.bounds[n] = {std::nullopt, S{1}};

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].first.size() != n)
      throw input_error("strict_feasibility: row dimension mismatch");
    LPRow<S> row;
    row.coeffs = rows[r].first;
    row.coeffs.push_back(strict_mask[r] ? S{-1} : S{0});
    row.rel = Relation::GreaterEq;
    row.rhs = rows[r].second;
    lp.rows.push_back(std::move(row));
  }
  for (const auto& h : domain.halfspaces()) {
    LPRow<S> row;
    row.coeffs = h.normal;
    row.coeffs.push_back(S{0});
    row.rel = Relation::LessEq;
    row.rhs = h.offset;
    lp.rows.push_back(std::move(row));
  }
  {
    LPRow<S> row;
    row.coeffs.assign(n + 1, S{1});
    row.coeffs[n] = S{0};
    row.rel = Relation::Equal;
    row.rhs = S{1};
    lp.rows.push_back(std::move(row));
  }

  const auto res = solve_lp(lp);
  StrictFeasibility<S> out;
  if (res.status != LPStatus::Optimal) return out;
  out.margin = res.value;
  out.witness.assign(res.solution.begin(), res.solution.begin() + n);
  out.feasible = res.value > scalar_traits<S>::strict_tolerance;
  if (!out.feasible) out.witness.clear();
  return out;
}

/// Full dimensionality relative to the simplex: some point clears every
/// halfspace and every coordinate bound strictly.
template <typename S>
bool is_full_dimensional(const Polytope<S>& p) {
  if (p.trivially_empty()) return false;
  const std::size_t n = p.num_states();
  std::vector<std::pair<std::vector<S>, S>> rows;
  std::vector<char> strict;
  for (const auto& h : p.halfspaces()) {
    std::vector<S> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -h.normal[i];
    rows.emplace_back(std::move(neg), -h.offset);
    strict.push_back(1);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<S> row(n, S{0});
    row[i] = S{1};
    rows.emplace_back(std::move(row), S{0});
    strict.push_back(1);
  }
  return strict_feasibility(rows, strict, Polytope<S>::simplex(n)).feasible;
}

}  // namespace infoval
