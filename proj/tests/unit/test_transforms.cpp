#include "infoval/transforms.hpp"

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
Action<S> probe() {
  return {"probe", {S{21} / S{20}, S{-3} / S{20}}};
}

template <typename S>
Belief<S> bel2(S a, S b) {
  return make_belief<S>({a, b});
}

template <typename S>
UPSCost<S> double_quadratic() {
  return make_quadratic_cost<S>({{S{2}, S{0}}, {S{0}, S{2}}});
}

template <typename S>
PosteriorDistribution<S> full_information() {
  return make_distribution<S>({{bel2<S>(S{1}, S{0}), S{1} / S{2}},
                               {bel2<S>(S{0}, S{1}), S{1} / S{2}}});
}

template <typename S>
bool near_point(const Belief<S>& b, const std::vector<S>& target, S radius) {
  S dist2{0};
  for (std::size_t i = 0; i < target.size(); ++i)
    dist2 += (b.p[i] - target[i]) * (b.p[i] - target[i]);
  return dist2 <= radius * radius;
}

DecisionProblem<double> sqrt_break_pair() {
  return make_problem<double>(2, {{"a1", {9.0, 0.0}}, {"a2", {1.0, 16.0}}});
}

PhiSpec sqrt_phi() { return {PhiSpec::Family::Power, 0.5, 0.0}; }

PhiSpec identity_phi() { return {PhiSpec::Family::Affine, 1.0, 0.0}; }

}  // namespace

TEST_CASE_TEMPLATE("menu edits add and remove actions", S, double, Rational) {
  auto d = guessing<S>();
  auto wide = add_actions(d, {probe<S>()});
  CHECK(wide.actions.size() == 3);
  CHECK(value_at(wide, {S{1}, S{0}}) == S{21} / S{20});

  auto back = remove_actions(wide, {"probe"});
  REQUIRE(back.actions.size() == d.actions.size());
  for (std::size_t i = 0; i < d.actions.size(); ++i) {
    CHECK(back.actions[i].label == d.actions[i].label);
    CHECK(back.actions[i].payoffs == d.actions[i].payoffs);
  }

  CHECK_THROWS_AS(add_actions(d, {{"left", {S{0}, S{0}}}}), input_error);
  CHECK_THROWS_AS(add_actions(d, {{"bad", {S{0}}}}), input_error);
  CHECK_THROWS_AS(remove_actions(d, {"missing"}), input_error);
  CHECK_THROWS_AS(remove_actions(d, {"left", "right"}), input_error);
}

TEST_CASE_TEMPLATE("removing a dominated action changes nothing", S, double,
                   Rational) {
  auto d = add_actions(guessing<S>(), {{"flat", {S{1} / S{4}, S{1} / S{4}}}});
  auto trimmed = remove_actions(d, {"flat"});
  CHECK_FALSE(is_consequential(d, trimmed));

  auto lone = remove_actions(d, {"right", "flat"});
  CHECK(subdivision(lone).cells.size() == 1);
  CHECK(is_consequential(d, lone));
}

TEST_CASE_TEMPLATE("affine payoff transforms preserve structure", S, double,
                   Rational) {
  auto d = guessing<S>();
  auto scaled = affine_transform(d, S{2}, S{1});
  const std::vector<S> mu{S{3} / S{10}, S{7} / S{10}};
  CHECK(abs_value(value_at(scaled, mu) - (S{2} * value_at(d, mu) + S{1})) <=
        scalar_traits<S>::strict_tolerance);

  CHECK(is_convex_difference(scaled, d).convex);
  auto shrunk = affine_transform(d, S{1} / S{2}, S{0});
  CHECK_FALSE(is_convex_difference(shrunk, d).convex);

  CHECK_THROWS_AS(affine_transform(d, S{0}, S{0}), input_error);
  CHECK_THROWS_AS(affine_transform(d, S{-1}, S{0}), input_error);
}

TEST_CASE("wealth shifts rescale cara payoffs") {
  CHECK(cara_wealth_factor(1.0, 3.0, 3.0) == doctest::Approx(1.0));
  CHECK(cara_wealth_factor(1.0, 0.0, -std::log(2.0)) == doctest::Approx(2.0));
  CHECK(cara_wealth_factor(2.0, 1.0, 2.0) == doctest::Approx(std::exp(-2.0)));
  CHECK_THROWS_AS(cara_wealth_factor(0.0, 0.0, 1.0), input_error);
  CHECK_THROWS_AS(cara_wealth_factor(-1.0, 0.0, 1.0), input_error);
}

TEST_CASE("payoff relabelings evaluate their named families") {
  CHECK(eval_phi({PhiSpec::Family::Affine, 2.0, 1.0}, 3.0) ==
        doctest::Approx(7.0));
  CHECK(eval_phi({PhiSpec::Family::Exp, 1.0, 0.0}, 1.0) ==
        doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(eval_phi(sqrt_phi(), 16.0) == doctest::Approx(4.0));
  CHECK(eval_phi({PhiSpec::Family::LogShift, 1.0, 0.0}, 0.0) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(eval_phi({PhiSpec::Family::Affine, -1.0, 0.0}, 1.0),
                  input_error);
  CHECK_THROWS_AS(eval_phi({PhiSpec::Family::Exp, 0.0, 0.0}, 1.0), input_error);
  CHECK_THROWS_AS(eval_phi(sqrt_phi(), -1.0), input_error);
  CHECK_THROWS_AS(eval_phi({PhiSpec::Family::LogShift, 1.0, 0.0}, -1.0),
                  input_error);
}

TEST_CASE("composing with an affine relabeling matches the payoff transform") {
  auto d = sqrt_break_pair();
  auto composed = compose_utility(d, {PhiSpec::Family::Affine, 2.0, 1.0},
                                  CurvatureShape::General);
  auto direct = affine_transform(d, 2.0, 1.0);
  REQUIRE(composed.problem.actions.size() == direct.actions.size());
  for (std::size_t i = 0; i < direct.actions.size(); ++i)
    CHECK(composed.problem.actions[i].payoffs == direct.actions[i].payoffs);

  auto same = compose_utility(d, identity_phi(), CurvatureShape::General);
  for (std::size_t i = 0; i < d.actions.size(); ++i)
    CHECK(same.problem.actions[i].payoffs == d.actions[i].payoffs);
  CHECK(same.shape == CurvatureShape::General);
}

TEST_CASE("composition rejects out-of-domain and saturated relabelings") {
  auto d = sqrt_break_pair();
  auto sq = compose_utility(d, sqrt_phi(), CurvatureShape::Concave);
  CHECK(sq.problem.actions[0].payoffs[0] == doctest::Approx(3.0));
  CHECK(sq.problem.actions[1].payoffs[1] == doctest::Approx(4.0));
  CHECK(sq.shape == CurvatureShape::Concave);

  auto negative = make_problem<double>(
      2, {{"a", {-1.0, 2.0}}, {"b", {2.0, -1.0}}});
  CHECK_THROWS_AS(compose_utility(negative, sqrt_phi(), CurvatureShape::General),
                  input_error);
  CHECK_THROWS_AS(compose_utility(d, {PhiSpec::Family::Exp, 200.0, 0.0},
                                  CurvatureShape::Concave),
                  input_error);
}

TEST_CASE("matching kinks with a shared neighbor break downward") {
  auto out = perturb_break_refinement(sqrt_break_pair(), sqrt_phi(), 1e-4);
  CHECK(out.case_name == "case 1a");
  CHECK(out.broke);
  CHECK(out.eps_used == doctest::Approx(1e-4));
  CHECK(out.kink_original == doctest::Approx(1.0 / 3.0));
  CHECK(out.kink_relabeled == doctest::Approx(1.0 / 3.0));
  CHECK(out.perturbed.actions[0].payoffs[0] == doctest::Approx(9.0 - 1e-4));

  auto check = compose_utility(out.perturbed, sqrt_phi(),
                               CurvatureShape::General);
  CHECK_FALSE(refines(subdivision(check.problem), subdivision(out.perturbed)));
}

TEST_CASE("a resurrected action at the old kink breaks by shifting its rival") {
  auto d = make_problem<double>(2, {{"a1", {36.0, 0.0}},
                                    {"a2", {9.0, 2401.0 / 144.0}},
                                    {"a3", {0.0, 49.0}}});
  CHECK(subdivision(d).cells.size() == 2);
  auto out = perturb_break_refinement(d, sqrt_phi(), 1e-4);
  CHECK(out.case_name == "case 1b");
  CHECK(out.broke);
  CHECK(out.kink_original == doctest::Approx(36.0 / 85.0));
  CHECK(out.perturbed.actions[2].payoffs[0] == doctest::Approx(1e-4));
}

TEST_CASE("an interior relabeled kink breaks by shifting the leftmost action") {
  auto d = make_problem<double>(2, {{"a1", {36.0, 0.0}},
                                    {"a2", {324.0 / 25.0, 25.0 / 4.0}},
                                    {"a3", {0.0, 25.0}}});
  CHECK(subdivision(d).cells.size() == 2);
  auto out = perturb_break_refinement(d, sqrt_phi(), 1e-4);
  CHECK(out.case_name == "case 2");
  CHECK(out.broke);
  CHECK(out.kink_original == doctest::Approx(36.0 / 61.0));
  CHECK(out.kink_relabeled == doctest::Approx(2.4 / 4.9));
  CHECK(out.perturbed.actions[0].payoffs[0] == doctest::Approx(36.0 + 1e-4));
}

TEST_CASE("identity relabelings never break and report it") {
  auto out = perturb_break_refinement(sqrt_break_pair(), identity_phi(), 1e-3);
  CHECK_FALSE(out.broke);
  CHECK(out.case_name == "case 1a");
}

TEST_CASE("perturbation rejects unusable inputs") {
  CHECK_THROWS_AS(perturb_break_refinement(sqrt_break_pair(), sqrt_phi(), 0.0),
                  input_error);
  auto three = make_problem<double>(
      3, {{"a", {1.0, 0.0, 0.0}}, {"b", {0.0, 1.0, 1.0}}});
  CHECK_THROWS_AS(perturb_break_refinement(three, sqrt_phi(), 1e-4),
                  input_error);

  auto lone = make_problem<double>(2, {{"a", {1.0, 1.0}}});
  CHECK_THROWS_AS(perturb_break_refinement(lone, sqrt_phi(), 1e-4),
                  inapplicable_error);

  auto drift = make_problem<double>(2, {{"a", {2.0, 0.0}}, {"b", {0.0, 1.0}}});
  CHECK_THROWS_AS(
      perturb_break_refinement(drift, {PhiSpec::Family::Exp, 1.0, 0.0}, 1e-4),
      inapplicable_error);
}

TEST_CASE_TEMPLATE("screening with a worthless low experiment", S, double,
                   Rational) {
  const S tol = std::is_same_v<S, double> ? S{1e-9} : S{0};
  auto low = guessing<S>();
  auto high = add_actions(low, {probe<S>()});
  const std::vector<S> prior{S{3} / S{4}, S{1} / S{4}};
  auto inst = make_screening_instance(high, low, S{1} / S{2}, prior,
                                      double_quadratic<S>());
  auto sol = screening_solve(inst, 400);

  CHECK(abs_value(sol.high_first_best.net_value - S{1201} / S{1600}) <= tol);
  CHECK(sol.low_first_best.distribution.support.size() == 1);
  CHECK(sol.low_second_best.distribution.support.size() == 1);
  CHECK(near_point(sol.low_second_best.distribution.support[0].first, prior,
                   tol));

  CHECK(abs_value(sol.high_price_fb - S{1} / S{1600}) <= tol);
  CHECK(abs_value(sol.low_price_fb) <= tol);
  CHECK(abs_value(sol.high_price_sb - S{1} / S{1600}) <= tol);
  CHECK(abs_value(sol.low_price_sb) <= tol);
  CHECK(sol.high_price_fb >= sol.low_price_fb - tol);
  CHECK(sol.high_price_sb >= sol.low_price_sb - tol);

  CHECK(abs_value(sol.high_ir_slack) <= tol);
  CHECK(abs_value(sol.low_ic_slack - S{1} / S{800}) <= tol);
  CHECK(sol.low_ic_slack >= -tol);

  CHECK(sol.low_sb_mpc_of_fb);
  CHECK_FALSE(sol.low_fb_strict_mpc_of_sb);
  CHECK_FALSE(sol.high_fb_strict_mpc_of_low_fb);
}

TEST_CASE("screening distorts the low type under entropy costs") {
  auto low = guessing<double>();
  auto high = add_actions(low, {probe<double>()});
  const std::vector<double> prior{0.5, 0.5};
  auto inst = make_screening_instance(high, low, 0.5, prior,
                                      make_entropy_cost<double>(0.2));
  auto sol = screening_solve(inst, 400);

  CHECK(sol.low_first_best.distribution.support.size() >= 2);
  CHECK(sol.high_price_fb >= sol.low_price_fb - 1e-9);
  CHECK(sol.high_price_sb >= sol.low_price_sb - 1e-9);
  CHECK(sol.high_ir_slack >= -1e-9);
  CHECK(sol.low_ic_slack >= -1e-9);
  CHECK(sol.low_sb_mpc_of_fb);
  CHECK_FALSE(sol.low_fb_strict_mpc_of_sb);

  // incentive constraint of the high type binds by construction; recompute it
  auto gross = [&](const DecisionProblem<double>& d,
                   const PosteriorDistribution<double>& phi) {
    double acc = 0;
    for (const auto& [b, w] : phi.support) acc += w * value_at(d, b.p);
    return acc - eval_cost(inst.cost, phi, prior);
  };
  const double high_at_own =
      gross(high, sol.high_first_best.distribution) - sol.high_price_sb;
  const double high_at_low =
      gross(high, sol.low_second_best.distribution) - sol.low_price_sb;
  CHECK(std::abs(high_at_own - high_at_low) <= 1e-8);

  SUBCASE("a vanishing high share removes the distortion") {
    auto lim = make_screening_instance(high, low, 1e-3, prior,
                                       make_entropy_cost<double>(0.2));
    auto near_fb = screening_solve(lim, 400);
    for (const auto& [b, w] : near_fb.low_second_best.distribution.support) {
      bool matched = false;
      for (const auto& [fb, fw] : near_fb.low_first_best.distribution.support)
        if (near_point(b, fb.p, 2.0 / 400 + 1e-9)) matched = true;
      CHECK(matched);
    }
  }
}

TEST_CASE_TEMPLATE("screening validates its instance", S, double, Rational) {
  auto low = guessing<S>();
  auto high = add_actions(low, {probe<S>()});
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  auto cost = double_quadratic<S>();
  CHECK_THROWS_AS(make_screening_instance(high, low, S{0}, prior, cost),
                  input_error);
  CHECK_THROWS_AS(make_screening_instance(high, low, S{1}, prior, cost),
                  input_error);
  CHECK_THROWS_AS(
      make_screening_instance(high, low, S{1} / S{2}, {S{1} / S{2}}, cost),
      input_error);
  CHECK_THROWS_AS(
      make_screening_instance(low, high, S{1} / S{2}, prior, cost),
      input_error);
}

TEST_CASE_TEMPLATE("delegation gains from totally refining extras", S, double,
                   Rational) {
  auto d = guessing<S>();
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  auto experiment = full_information<S>();

  auto rep = delegation_compare(d, {probe<S>()}, S{1} / S{4}, experiment,
                                prior);
  CHECK(rep.extras_totally_refining);
  CHECK(rep.agent_buys_baseline);
  CHECK(rep.agent_buys_extended);
  CHECK(rep.principal_baseline == S{1});
  CHECK(rep.principal_extended == S{41} / S{40});
  CHECK(rep.principal_extended >= rep.principal_baseline);
}

TEST_CASE_TEMPLATE("a tent action can price the agent out of learning", S,
                   double, Rational) {
  auto d = guessing<S>();
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  auto experiment = full_information<S>();
  const Action<S> tent{"flat", {S{3} / S{4}, S{3} / S{4}}};

  auto rep = delegation_compare(d, {tent}, S{3} / S{8}, experiment, prior);
  CHECK_FALSE(rep.extras_totally_refining);
  CHECK(rep.agent_buys_baseline);
  CHECK_FALSE(rep.agent_buys_extended);
  CHECK(rep.principal_baseline == S{1});
  CHECK(rep.principal_extended == S{3} / S{4});
  CHECK(rep.principal_extended < rep.principal_baseline);
}

TEST_CASE_TEMPLATE("delegation with no extras changes nothing", S, double,
                   Rational) {
  auto d = guessing<S>();
  const std::vector<S> prior{S{1} / S{2}, S{1} / S{2}};
  auto experiment = full_information<S>();

  auto rep = delegation_compare(d, {}, S{1} / S{4}, experiment, prior);
  CHECK(rep.agent_buys_baseline == rep.agent_buys_extended);
  CHECK(rep.principal_baseline == rep.principal_extended);
  CHECK(rep.extras_totally_refining);

  CHECK_THROWS_AS(delegation_compare(d, {}, S{0}, experiment, prior),
                  input_error);
  CHECK_THROWS_AS(delegation_compare(d, {}, S{1} / S{4}, experiment,
                                     {S{1} / S{4}, S{3} / S{4}}),
                  input_error);
}
