#include "infoval/acquisition.hpp"

#include "doctest.h"
#include "../support/seeded.hpp"

#include <cmath>

using namespace infoval;

namespace {

template <typename S>
DecisionProblem<S> guessing() {
  return make_problem<S>(2, {{"left", {S{1}, S{0}}}, {"right", {S{0}, S{1}}}});
}

template <typename S>
Belief<S> bel2(S a, S b) {
  return make_belief<S>({a, b});
}

template <typename S>
UPSCost<S> identity_quadratic() {
  return make_quadratic_cost<S>({{S{1}, S{0}}, {S{0}, S{1}}});
}

template <typename S>
bool near_point(const Belief<S>& b, const std::vector<S>& target, S radius) {
  S dist2{0};
  for (std::size_t i = 0; i < target.size(); ++i)
    dist2 += (b.p[i] - target[i]) * (b.p[i] - target[i]);
  return dist2 <= radius * radius;
}

}  // namespace

TEST_CASE_TEMPLATE("posterior distributions validate and average", S, double,
                   Rational) {
  auto phi = make_distribution<S>({{bel2<S>(S{1}, S{0}), S{1} / S{2}},
                                   {bel2<S>(S{0}, S{1}), S{1} / S{2}}});
  auto m = phi.mean();
  CHECK(abs_value(m[0] - S{1} / S{2}) <= scalar_traits<S>::merge_tolerance);
  CHECK(plausible_for(phi, {S{1} / S{2}, S{1} / S{2}}));
  CHECK_FALSE(plausible_for(phi, {S{1} / S{4}, S{3} / S{4}}));

  CHECK_THROWS_AS(make_distribution<S>({}), input_error);
  CHECK_THROWS_AS(
      make_distribution<S>({{bel2<S>(S{1}, S{0}), S{1} / S{2}}}), input_error);
  CHECK_THROWS_AS(make_distribution<S>({{bel2<S>(S{1}, S{0}), S{1} / S{2}},
                                        {bel2<S>(S{1}, S{0}), S{1} / S{2}}}),
                  input_error);
}

TEST_CASE("entropy potential and full-information cost") {
  auto cost = make_entropy_cost<double>(1.0);
  const std::vector<double> uniform{0.5, 0.5};
  CHECK(eval_potential(cost, uniform) == doctest::Approx(-std::log(2.0)));
  auto full = make_distribution<double>(
      {{bel2<double>(1.0, 0.0), 0.5}, {bel2<double>(0.0, 1.0), 0.5}});
  CHECK(eval_cost(cost, full, uniform) == doctest::Approx(std::log(2.0)));
  CHECK(check_strict_convexity(cost, 2));

  auto scaled = make_entropy_cost<double>(0.25);
  CHECK(eval_cost(scaled, full, uniform) == doctest::Approx(std::log(2.0) / 4));

  auto shifted = make_distribution<double>(
      {{bel2<double>(1.0, 0.0), 0.6}, {bel2<double>(0.0, 1.0), 0.4}});
  CHECK_THROWS_AS(eval_cost(cost, shifted, uniform), input_error);
}

TEST_CASE("entropy potential needs float arithmetic") {
  auto cost = make_entropy_cost<Rational>(Rational{1});
  std::vector<Rational> uniform{Rational{1} / 2, Rational{1} / 2};
  CHECK_THROWS_AS(eval_potential(cost, uniform), inapplicable_error);
}

TEST_CASE_TEMPLATE("quadratic potential and cost", S, double, Rational) {
  auto cost = identity_quadratic<S>();
  const std::vector<S> uniform{S{1} / S{2}, S{1} / S{2}};
  CHECK(abs_value(eval_potential(cost, uniform) - S{1} / S{2}) <=
        scalar_traits<S>::merge_tolerance);
  auto full = make_distribution<S>(
      {{bel2<S>(S{1}, S{0}), S{1} / S{2}}, {bel2<S>(S{0}, S{1}), S{1} / S{2}}});
  CHECK(abs_value(eval_cost(cost, full, uniform) - S{1} / S{2}) <=
        scalar_traits<S>::merge_tolerance);
  CHECK(check_strict_convexity(cost, 2));
  CHECK_FALSE(check_strict_convexity(
      make_quadratic_cost<S>({{S{0}, S{0}}, {S{0}, S{0}}}), 2));
}

TEST_CASE_TEMPLATE("paraboloid potential takes the max sheet", S, double,
                   Rational) {
  auto cost = make_paraboloid_cost<S>(
      {{{S{0}, S{1}}, S{0}, S{1}, {S{1} / S{5}, S{4} / S{5}}},
       {{S{1}, S{0}}, S{0}, S{1}, {S{7} / S{10}, S{3} / S{10}}}});
  const std::vector<S> mu{S{1} / S{2}, S{1} / S{2}};
  // Sheets: 1/2 + 2*(0.3)^2 = 0.68 and 1/2 + 2*(0.2)^2 = 0.58.
  CHECK(abs_value(eval_potential(cost, mu) - S{17} / S{25}) <=
        scalar_traits<S>::merge_tolerance);
  CHECK(check_strict_convexity(cost, 2));
}

TEST_CASE_TEMPLATE("simplex grid enumerates lattice beliefs", S, double,
                   Rational) {
  auto g2 = simplex_grid<S>(2, 4);
  CHECK(g2.size() == 5);
  auto g3 = simplex_grid<S>(3, 3);
  CHECK(g3.size() == 10);
  for (const auto& b : g3) {
    S total{0};
    for (const auto& c : b.p) total += c;
    CHECK(abs_value(total - S{1}) <= scalar_traits<S>::merge_tolerance);
  }
  CHECK(default_grid_resolution(2) == 400);
  CHECK(default_grid_resolution(3) == 60);
  CHECK(default_grid_resolution(4) == 20);
  CHECK_THROWS_AS(default_grid_resolution(5), input_error);
}

TEST_CASE_TEMPLATE("expensive information leaves the prior degenerate", S,
                   double, Rational) {
  auto d = guessing<S>();
  auto cost = make_quadratic_cost<S>({{S{100}, S{0}}, {S{0}, S{100}}});
  const std::vector<S> prior{S{2} / S{5}, S{3} / S{5}};
  auto sol = solve_acquisition(d, cost, prior, 20);
  REQUIRE(sol.distribution.support.size() == 1);
  CHECK(abs_value(sol.distribution.support.front().first.p[1] - S{3} / S{5}) <=
        scalar_traits<S>::merge_tolerance);
  CHECK(abs_value(sol.net_value - S{3} / S{5}) <=
        scalar_traits<S>::merge_tolerance);
  CHECK(sol.dual_gap <= S{1} / S{1000000});
}

TEST_CASE_TEMPLATE("cheap information reaches full revelation", S, double,
                   Rational) {
  auto d = guessing<S>();
  auto cost = make_quadratic_cost<S>(
      {{S{1} / S{2}, S{0}}, {S{0}, S{1} / S{2}}});
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  auto sol = solve_acquisition(d, cost, prior, 8);
  REQUIRE(sol.distribution.support.size() == 2);
  for (const auto& [b, w] : sol.distribution.support) {
    CHECK(abs_value(w - S{1} / S{2}) <= scalar_traits<S>::merge_tolerance);
    const bool vertex =
        abs_value(b.p[0] - S{1}) <= scalar_traits<S>::merge_tolerance ||
        abs_value(b.p[1] - S{1}) <= scalar_traits<S>::merge_tolerance;
    CHECK(vertex);
  }
  CHECK(abs_value(sol.net_value - S{3} / S{4}) <=
        scalar_traits<S>::merge_tolerance);
}

TEST_CASE("binary instance with a hand-solved two-point optimum") {
  // Value max(1-m, m) against the max-paraboloid potential whose univariate
  // form is max(m + 2(m-0.8)^2, 1-m + 2(m-0.3)^2); the concavification at
  // prior m=0.3 touches at m=0.25 and m=0.75 with weights 0.9 and 0.1.
  auto d = guessing<double>();
  auto cost = make_paraboloid_cost<double>(
      {{{0.0, 1.0}, 0.0, 1.0, {0.2, 0.8}}, {{1.0, 0.0}, 0.0, 1.0, {0.7, 0.3}}});
  const std::vector<double> prior{0.7, 0.3};

  auto sol = solve_acquisition(d, cost, prior, 400);
  REQUIRE(sol.distribution.support.size() == 2);
  double w_low = 0, w_high = 0;
  for (const auto& [b, w] : sol.distribution.support) {
    if (near_point(b, {0.75, 0.25}, 1e-7)) w_low = w;
    if (near_point(b, {0.25, 0.75}, 1e-7)) w_high = w;
  }
  CHECK(w_low == doctest::Approx(0.9).epsilon(1e-7));
  CHECK(w_high == doctest::Approx(0.1).epsilon(1e-7));
  CHECK(sol.net_value == doctest::Approx(0.705).epsilon(1e-9));

  SUBCASE("coarser grids never overstate the attainable value") {
    auto s50 = solve_acquisition(d, cost, prior, 50);
    auto s100 = solve_acquisition(d, cost, prior, 100);
    CHECK(s50.net_value <= s100.net_value + 1e-12);
    CHECK(s100.net_value <= sol.net_value + 1e-12);
    CHECK(s100.net_value == doctest::Approx(0.705).epsilon(1e-9));
  }
}

TEST_CASE_TEMPLATE("solve_acquisition rejects bad priors", S, double,
                   Rational) {
  auto d = guessing<S>();
  auto cost = identity_quadratic<S>();
  CHECK_THROWS_AS(solve_acquisition(d, cost, {S{1}, S{0}}, 10), input_error);
  CHECK_THROWS_AS(
      solve_acquisition(d, cost, {S{1} / S{2}, S{1} / S{4}, S{1} / S{4}}, 10),
      input_error);
}

TEST_CASE_TEMPLATE("mean-preserving contraction via couplings", S, double,
                   Rational) {
  auto degenerate =
      make_distribution<S>({{bel2<S>(S{1} / S{2}, S{1} / S{2}), S{1}}});
  auto full = make_distribution<S>(
      {{bel2<S>(S{1}, S{0}), S{1} / S{2}}, {bel2<S>(S{0}, S{1}), S{1} / S{2}}});
  CHECK(is_mpc(degenerate, full));
  CHECK_FALSE(is_mpc(full, degenerate));
  CHECK(is_strict_mpc(degenerate, full));
  CHECK_FALSE(is_strict_mpc(full, degenerate));

  CHECK(is_mpc(full, full));
  CHECK_FALSE(is_strict_mpc(full, full));

  auto inner = make_distribution<S>({{bel2<S>(S{7} / S{10}, S{3} / S{10}),
                                      S{1} / S{2}},
                                     {bel2<S>(S{3} / S{10}, S{7} / S{10}),
                                      S{1} / S{2}}});
  CHECK(is_mpc(inner, full));
  CHECK(is_strict_mpc(inner, full));

  // Same mean yet neither support nests: incomparable even with two states.
  auto left = make_distribution<S>({{bel2<S>(S{4} / S{5}, S{1} / S{5}),
                                     S{1} / S{2}},
                                    {bel2<S>(S{1} / S{5}, S{4} / S{5}),
                                     S{1} / S{2}}});
  auto right = make_distribution<S>({{bel2<S>(S{9} / S{10}, S{1} / S{10}),
                                      S{1} / S{5}},
                                     {bel2<S>(S{2} / S{5}, S{3} / S{5}),
                                      S{4} / S{5}}});
  CHECK_FALSE(is_mpc(left, right));
  CHECK_FALSE(is_mpc(right, left));

  auto other_mean =
      make_distribution<S>({{bel2<S>(S{1} / S{4}, S{3} / S{4}), S{1}}});
  CHECK_THROWS_AS(is_mpc(degenerate, other_mean), input_error);
}

TEST_CASE_TEMPLATE("nonredundance needs one interior cell per posterior", S,
                   double, Rational) {
  auto d = guessing<S>();
  auto ok = make_distribution<S>({{bel2<S>(S{7} / S{10}, S{3} / S{10}),
                                   S{9} / S{10}},
                                  {bel2<S>(S{1} / S{5}, S{4} / S{5}),
                                   S{1} / S{10}}});
  CHECK(is_nonredundant(d, ok));

  auto boundary = make_distribution<S>({{bel2<S>(S{1} / S{2}, S{1} / S{2}),
                                         S{1} / S{2}},
                                        {bel2<S>(S{1} / S{5}, S{4} / S{5}),
                                         S{1} / S{2}}});
  CHECK_FALSE(is_nonredundant(d, boundary));

  auto same_cell = make_distribution<S>({{bel2<S>(S{2} / S{5}, S{3} / S{5}),
                                          S{1} / S{2}},
                                         {bel2<S>(S{1} / S{5}, S{4} / S{5}),
                                          S{1} / S{2}}});
  CHECK_FALSE(is_nonredundant(d, same_cell));
}

TEST_CASE_TEMPLATE("synthesized cost regenerates its target support", S,
                   double, Rational) {
  auto d = guessing<S>();
  const std::vector<S> lo{S{7} / S{10}, S{3} / S{10}};
  const std::vector<S> hi{S{1} / S{5}, S{4} / S{5}};
  auto phi = make_distribution<S>(
      {{Belief<S>{lo}, S{9} / S{10}}, {Belief<S>{hi}, S{1} / S{10}}});
  const std::vector<S> prior{S{13} / S{20}, S{7} / S{20}};
  REQUIRE(plausible_for(phi, prior));

  auto cost = synthesize_cost(d, phi, prior);
  CHECK(cost.family == UPSCost<S>::Family::MaxParaboloid);
  CHECK(abs_value(eval_potential(cost, lo) - value_at(d, lo)) <=
        S{1} / S{1000000});
  CHECK(abs_value(eval_potential(cost, hi) - value_at(d, hi)) <=
        S{1} / S{1000000});
  for (long k = 1; k < 40; ++k) {
    const std::vector<S> mu{S(k) / S{40}, S{1} - S(k) / S{40}};
    CHECK(value_at(d, mu) <=
          eval_potential(cost, mu) + scalar_traits<S>::strict_tolerance);
  }

  auto sol = solve_acquisition(d, cost, prior, 400, {lo, hi});
  const S radius = S{2} / S{400};
  for (const auto& [b, w] : sol.distribution.support) {
    CHECK((near_point(b, lo, radius) || near_point(b, hi, radius)));
  }

  auto redundant = make_distribution<S>({{bel2<S>(S{2} / S{5}, S{3} / S{5}),
                                          S{1} / S{2}},
                                         {bel2<S>(S{1} / S{5}, S{4} / S{5}),
                                          S{1} / S{2}}});
  CHECK_THROWS_AS(
      synthesize_cost(d, redundant, {S{3} / S{10}, S{7} / S{10}}),
      input_error);
}

TEST_CASE_TEMPLATE("adversarial cost makes learning worthless for its base",
                   S, double, Rational) {
  auto d = guessing<S>();
  auto dhat = make_problem<S>(2, {{"left", {S{1}, S{0}}},
                                  {"right", {S{0}, S{1}}},
                                  {"flat", {S{3} / S{4}, S{3} / S{4}}}});
  auto cost = adversarial_cost(dhat, S{1} / S{100}, identity_quadratic<S>());
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  CHECK_FALSE(shift_majorizes(dhat, d, prior).holds);

  auto under_hat = solve_acquisition(dhat, cost, prior, 100);
  REQUIRE(under_hat.distribution.support.size() == 1);
  CHECK(abs_value(under_hat.net_value - S{3} / S{4}) <=
        S{1} / S{1000000});

  // The flat action plateaus over the old kink, so the original problem
  // still gains from information the expanded one ignores.
  auto under_base = solve_acquisition(d, cost, prior, 100);
  CHECK(under_base.net_value - value_at(d, prior) > S{1} / S{5});

  CHECK_THROWS_AS(adversarial_cost(dhat, S{0}, identity_quadratic<S>()),
                  input_error);
}

TEST_CASE_TEMPLATE("plateau expansion keeps the base gain at zero", S, double,
                   Rational) {
  auto d = make_problem<S>(2, {{"left", {S{1}, S{0}}},
                               {"right", {S{0}, S{1}}},
                               {"flat", {S{3} / S{5}, S{3} / S{5}}}});
  auto dhat = make_problem<S>(
      2, {{"left", {S{1}, S{0}}},
          {"right", {S{0}, S{1}}},
          {"flat", {S{3} / S{5}, S{3} / S{5}}},
          {"lean_l", {S{69} / S{100}, S{49} / S{100}}},
          {"lean_r", {S{49} / S{100}, S{69} / S{100}}}});
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  // The expansion majorizes the base up to an affine shift at this prior, so
  // no posterior-separable cost lets the base problem gain more from
  // information than the expanded one.
  CHECK(shift_majorizes(dhat, d, prior).holds);

  auto cost = adversarial_cost(dhat, S{1} / S{100}, identity_quadratic<S>());
  auto under_hat = solve_acquisition(dhat, cost, prior, 100);
  auto under_base = solve_acquisition(d, cost, prior, 100);
  const S gain_hat = under_hat.net_value - value_at(dhat, prior);
  const S gain_base = under_base.net_value - value_at(d, prior);
  CHECK(abs_value(gain_hat) <= S{1} / S{1000000});
  CHECK(gain_base <= gain_hat + S{1} / S{1000000});
  REQUIRE(under_base.distribution.support.size() == 1);
  CHECK(near_point(under_base.distribution.support.front().first, prior,
                   S{1} / S{1000000}));
}

TEST_CASE_TEMPLATE("expanding a menu spreads the chosen information", S,
                   double, Rational) {
  auto d = guessing<S>();
  auto dhat = make_problem<S>(
      2, {{"left", {S{1}, S{0}}},
          {"right", {S{0}, S{1}}},
          {"probe", {S{21} / S{20}, S{-3} / S{20}}}});
  auto cost = make_quadratic_cost<S>({{S{2}, S{0}}, {S{0}, S{2}}});
  const std::vector<S> prior{S{3} / S{4}, S{1} / S{4}};

  auto sol_v = solve_acquisition(d, cost, prior, 400);
  auto sol_hat = solve_acquisition(dhat, cost, prior, 400);

  REQUIRE(sol_v.distribution.support.size() == 1);
  CHECK(abs_value(sol_v.net_value - S{3} / S{4}) <=
        S{1} / S{1000000});

  REQUIRE(sol_hat.distribution.support.size() == 2);
  const S radius = S{1} / S{100000};
  bool saw_a = false, saw_b = false;
  for (const auto& [b, w] : sol_hat.distribution.support) {
    if (near_point(b, {S{61} / S{80}, S{19} / S{80}}, radius)) saw_a = true;
    if (near_point(b, {S{59} / S{80}, S{21} / S{80}}, radius)) saw_b = true;
    CHECK(abs_value(w - S{1} / S{2}) <= S{1} / S{100000});
  }
  CHECK(saw_a);
  CHECK(saw_b);
  CHECK(abs_value(sol_hat.net_value - S{1201} / S{1600}) <=
        S{1} / S{1000000});

  // The richer menu's choice is a spread of the smaller menu's choice and
  // never strictly coarser.
  CHECK(is_mpc(sol_v.distribution, sol_hat.distribution));
  CHECK(is_strict_mpc(sol_v.distribution, sol_hat.distribution));
  CHECK_FALSE(is_strict_mpc(sol_hat.distribution, sol_v.distribution));
}

TEST_CASE_TEMPLATE("three-state cross yields incomparable optima", S, double,
                   Rational) {
  auto d = make_problem<S>(
      3, {{"a", {S{3} / S{2}, S{1} / S{2}, S{1} / S{2}}},
          {"b", {S{1} / S{2}, S{3} / S{2}, S{3} / S{2}}}});
  auto dhat = make_problem<S>(3, {{"c", {S{2}, S{-2}, S{-2}}},
                                  {"d", {S{-2}, S{2}, S{2}}}});

  auto pair = incomparable_pair_construction(d, dhat);
  REQUIRE(pair.phi_v.support.size() == 2);
  REQUIRE(pair.phi_vhat.support.size() == 2);
  for (const auto& c : pair.prior) CHECK(c > S{0});
  CHECK(plausible_for(pair.phi_v, pair.prior));
  CHECK(plausible_for(pair.phi_vhat, pair.prior));

  CHECK_FALSE(is_mpc(pair.phi_v, pair.phi_vhat));
  CHECK_FALSE(is_mpc(pair.phi_vhat, pair.phi_v));

  // Each problem picks its own pair under the synthesized cost.
  std::vector<std::vector<S>> extras;
  for (const auto& [b, w] : pair.phi_v.support) extras.push_back(b.p);
  for (const auto& [b, w] : pair.phi_vhat.support) extras.push_back(b.p);

  const S radius = S{2} / S{60};
  auto under_v = solve_acquisition(pair.shifted_v, pair.cost, pair.prior, 60,
                                   extras);
  for (const auto& [b, w] : under_v.distribution.support) {
    bool matched = false;
    for (const auto& [point, pw] : pair.phi_v.support)
      if (near_point(b, point.p, radius)) matched = true;
    CHECK(matched);
  }
  auto under_hat =
      solve_acquisition(dhat, pair.cost, pair.prior, 60, extras);
  for (const auto& [b, w] : under_hat.distribution.support) {
    bool matched = false;
    for (const auto& [point, pw] : pair.phi_vhat.support)
      if (near_point(b, point.p, radius)) matched = true;
    CHECK(matched);
  }

  // The original problem ranks distributions identically to its shift.
  auto under_original =
      solve_acquisition(d, pair.cost, pair.prior, 60, extras);
  for (const auto& [b, w] : under_original.distribution.support) {
    bool matched = false;
    for (const auto& [point, pw] : pair.phi_v.support)
      if (near_point(b, point.p, radius)) matched = true;
    CHECK(matched);
  }
}

TEST_CASE_TEMPLATE("incomparability construction rejects unusable inputs", S,
                   double, Rational) {
  CHECK_THROWS_AS(
      incomparable_pair_construction(guessing<S>(), guessing<S>()),
      inapplicable_error);

  auto affine = make_problem<S>(3, {{"only", {S{1}, S{1}, S{1}}}});
  auto kinked = make_problem<S>(
      3, {{"a", {S{3} / S{2}, S{1} / S{2}, S{1} / S{2}}},
          {"b", {S{1} / S{2}, S{3} / S{2}, S{3} / S{2}}}});
  CHECK_THROWS_AS(incomparable_pair_construction(affine, kinked),
                  inapplicable_error);

  // Affine difference: the same problem shifted by a constant.
  auto shifted = make_problem<S>(
      3, {{"a", {S{5} / S{2}, S{3} / S{2}, S{3} / S{2}}},
          {"b", {S{3} / S{2}, S{5} / S{2}, S{5} / S{2}}}});
  CHECK_THROWS_AS(incomparable_pair_construction(kinked, shifted),
                  inapplicable_error);
}
