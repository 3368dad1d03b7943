#include "doctest.h"
#include "infoval/geometry.hpp"

#include <algorithm>

using namespace infoval;

namespace {

template <typename S>
bool has_vertex(const Polytope<S>& p, std::vector<S> v) {
  for (const auto& cand : p.vertices()) {
    bool same = true;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (abs_value(cand.p[i] - v[i]) > S{1} / S{1000000}) same = false;
    if (same) return true;
  }
  return false;
}

}  // namespace

TEST_CASE_TEMPLATE("simplex vertices are the unit beliefs", S, double,
                   Rational) {
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    auto sx = Polytope<S>::simplex(n);
    CHECK(sx.vertices().size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<S> e(n, S{0});
      e[i] = S{1};
      CHECK(has_vertex(sx, e));
    }
    CHECK(is_full_dimensional(sx));
  }
}

TEST_CASE_TEMPLATE("halfspace cuts produce the expected vertices", S, double,
                   Rational) {
  // mu2 <= 1/2 inside the two-state simplex
  Polytope<S> half(2, {{{S{0}, S{1}}, S{1} / 2}});
  CHECK(half.vertices().size() == 2);
  CHECK(has_vertex(half, {S{1}, S{0}}));
  CHECK(has_vertex(half, {S{1} / 2, S{1} / 2}));
  CHECK(is_full_dimensional(half));
  CHECK_FALSE(half.is_empty());
}

TEST_CASE_TEMPLATE("rows parallel to the simplex are canonicalized away", S,
                   double, Rational) {
  Polytope<S> vacuous(2, {{{S{1}, S{1}}, S{1}}});
  CHECK(vacuous.halfspaces().empty());
  CHECK_FALSE(vacuous.trivially_empty());

  Polytope<S> contradictory(2, {{{S{1}, S{1}}, S{1} / 2}});
  CHECK(contradictory.trivially_empty());
  CHECK(contradictory.is_empty());
  CHECK_FALSE(contradictory.contains_point({S{1} / 2, S{1} / 2}));
  CHECK_FALSE(is_full_dimensional(contradictory));
}

TEST_CASE_TEMPLATE("intersection and emptiness", S, double, Rational) {
  Polytope<S> low(2, {{{S{0}, S{1}}, S{1} / 2}});
  Polytope<S> high(2, {{{S{0}, S{-1}}, S{-3} / 4}});
  auto inter = Polytope<S>::intersect(low, high);
  CHECK(inter.is_empty());
  CHECK_FALSE(is_full_dimensional(inter));

  Polytope<S> touching(2, {{{S{0}, S{-1}}, S{-1} / 2}});
  auto point = Polytope<S>::intersect(low, touching);
  CHECK(point.vertices().size() == 1);
  CHECK(has_vertex(point, {S{1} / 2, S{1} / 2}));
  CHECK_FALSE(is_full_dimensional(point));
}

TEST_CASE_TEMPLATE("containment is vertex-wise", S, double, Rational) {
  Polytope<S> half(2, {{{S{0}, S{1}}, S{1} / 2}});
  Polytope<S> face(2, {{{S{0}, S{1}}, S{0}}});
  CHECK(half.contains(face));
  CHECK_FALSE(face.contains(half));
  CHECK(Polytope<S>::simplex(2).contains(half));
  CHECK(half.contains(Polytope<S>::intersect(half, face)));
}

TEST_CASE_TEMPLATE("three-state cell geometry", S, double, Rational) {
  // mu3 <= mu1
  Polytope<S> cell(3, {{{S{-1}, S{0}, S{1}}, S{0}}});
  CHECK(cell.vertices().size() == 3);
  CHECK(has_vertex(cell, {S{1}, S{0}, S{0}}));
  CHECK(has_vertex(cell, {S{0}, S{1}, S{0}}));
  CHECK(has_vertex(cell, {S{1} / 2, S{0}, S{1} / 2}));
  CHECK(is_full_dimensional(cell));
  auto ip = cell.interior_point();
  CHECK(cell.contains_point(ip));
  CHECK(abs_value(ip[0] + ip[1] + ip[2] - S{1}) <= S{1} / S{1000000000});
}

TEST_CASE_TEMPLATE("redundant duplicate rows do not multiply vertices", S,
                   double, Rational) {
  Polytope<S> p(2, {{{S{0}, S{1}}, S{1} / 2},
                    {{S{0}, S{1}}, S{1} / 2},
                    {{S{0}, S{2}}, S{1}}});
  CHECK(p.vertices().size() == 2);
}

TEST_CASE_TEMPLATE("strict feasibility maximizes the worst slack", S, double,
                   Rational) {
  std::vector<std::pair<std::vector<S>, S>> rows{{{S{-1}, S{1}}, S{0}}};
  auto sf = strict_feasibility<S>(rows, {1}, Polytope<S>::simplex(2));
  REQUIRE(sf.feasible);
  CHECK(sf.margin == S{1});
  CHECK(sf.witness[0] == S{0});
  CHECK(sf.witness[1] == S{1});

  // mu2 - mu1 > 0 and mu1 - mu2 > 0 cannot hold together.
  std::vector<std::pair<std::vector<S>, S>> both{{{S{-1}, S{1}}, S{0}},
                                                 {{S{1}, S{-1}}, S{0}}};
  auto sf2 = strict_feasibility<S>(both, {1, 1}, Polytope<S>::simplex(2));
  CHECK_FALSE(sf2.feasible);

  // Non-strict version is satisfiable on the diagonal.
  auto sf3 = strict_feasibility<S>(both, {0, 0}, Polytope<S>::simplex(2));
  CHECK(sf3.feasible);
}

TEST_CASE_TEMPLATE("belief validation", S, double, Rational) {
  auto b = make_belief<S>({S{1} / 2, S{1} / 2});
  CHECK(b.size() == 2);
  CHECK_THROWS_AS(make_belief<S>({S{1} / 2, S{1} / 4}), input_error);
  CHECK_THROWS_AS(make_belief<S>({S{3} / 2, S{-1} / 2}), input_error);
  CHECK_THROWS_AS(make_belief<S>({}), input_error);
}

TEST_CASE("vertex enumeration scale guardrails") {
  CHECK_THROWS_AS(Polytope<double>::simplex(5).vertices(), input_error);
}
