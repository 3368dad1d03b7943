#include "doctest.h"
#include "infoval/lp.hpp"

using namespace infoval;

TEST_CASE_TEMPLATE("bounded maximum with verified certificate", S, double,
                   Rational) {
  LinearProgram<S> lp;
  lp.objective = {S{1}, S{1}};
  lp.rows.push_back({{S{1}, S{1}}, Relation::LessEq, S{1}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{1});
  CHECK(verify_optimality(lp, res));
}

TEST_CASE_TEMPLATE("infeasible system yields a verified impossibility witness",
                   S, double, Rational) {
  LinearProgram<S> lp;
  lp.objective = {S{0}};
  lp.rows.push_back({{S{1}}, Relation::GreaterEq, S{2}});
  lp.rows.push_back({{S{1}}, Relation::LessEq, S{1}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Infeasible);
  REQUIRE(res.farkas.has_value());
  CHECK(verify_farkas(lp, *res.farkas));
}

TEST_CASE_TEMPLATE("multi-row infeasibility witness", S, double, Rational) {
  LinearProgram<S> lp;
  lp.objective = {S{0}, S{0}};
  lp.rows.push_back({{S{1}, S{1}}, Relation::GreaterEq, S{3}});
  lp.rows.push_back({{S{1}, S{1}}, Relation::LessEq, S{1}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Infeasible);
  REQUIRE(res.farkas.has_value());
  CHECK(verify_farkas(lp, *res.farkas));
}

TEST_CASE_TEMPLATE("unbounded direction detected", S, double, Rational) {
  LinearProgram<S> lp;
  lp.objective = {S{1}};
  auto res = solve_lp(lp);
  CHECK(res.status == LPStatus::Unbounded);
}

TEST_CASE_TEMPLATE("free variables and minimization", S, double, Rational) {
  LinearProgram<S> lp;
  lp.sense = Sense::Minimize;
  lp.objective = {S{1}};
  lp.bounds = {VarBounds<S>::free_var()};
  lp.rows.push_back({{S{1}}, Relation::Equal, S{3}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{3});
  CHECK(verify_optimality(lp, res));
}

TEST_CASE_TEMPLATE("negative lower bound honored", S, double, Rational) {
  LinearProgram<S> lp;
  lp.sense = Sense::Minimize;
  lp.objective = {S{1}};
  lp.bounds = {VarBounds<S>::interval(S{-5}, S{10})};
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{-5});
  CHECK(verify_optimality(lp, res));
}

TEST_CASE_TEMPLATE("boxed variables with a joint cap", S, double, Rational) {
  LinearProgram<S> lp;
  lp.objective = {S{2}, S{3}};
  lp.bounds = {VarBounds<S>::interval(S{0}, S{4}),
               VarBounds<S>::interval(S{0}, S{5})};
  lp.rows.push_back({{S{1}, S{1}}, Relation::LessEq, S{6}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{17});
  CHECK(res.solution[0] == S{1});
  CHECK(res.solution[1] == S{5});
  CHECK(verify_optimality(lp, res));
}

TEST_CASE_TEMPLATE("hand-checked duals on a two-row maximum", S, double,
                   Rational) {
  LinearProgram<S> lp;
  lp.objective = {S{2}, S{3}};
  lp.rows.push_back({{S{1}, S{1}}, Relation::LessEq, S{4}});
  lp.rows.push_back({{S{1}, S{3}}, Relation::LessEq, S{6}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{9});
  CHECK(res.solution[0] == S{3});
  CHECK(res.solution[1] == S{1});
  CHECK(res.duals[0] == S{3} / S{2});
  CHECK(res.duals[1] == S{1} / S{2});
  CHECK(verify_optimality(lp, res));
}

TEST_CASE("degenerate pivoting terminates at the known optimum") {
  // Beale's cycling instance; lowest-index pivoting must terminate.
  using S = Rational;
  LinearProgram<S> lp;
  lp.sense = Sense::Minimize;
  lp.objective = {S{-3} / 4, S{150}, S{-1} / 50, S{6}};
  lp.rows.push_back(
      {{S{1} / 4, S{-60}, S{-1} / 25, S{9}}, Relation::LessEq, S{0}});
  lp.rows.push_back(
      {{S{1} / 2, S{-90}, S{-1} / 50, S{3}}, Relation::LessEq, S{0}});
  lp.rows.push_back({{S{0}, S{0}, S{1}, S{0}}, Relation::LessEq, S{1}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{-1} / 20);
  CHECK(verify_optimality(lp, res));
}

TEST_CASE_TEMPLATE("empty program is rejected as infeasible", S, double,
                   Rational) {
  LinearProgram<S> lp;
  auto res = solve_lp(lp);
  CHECK(res.status == LPStatus::Infeasible);
}

TEST_CASE_TEMPLATE("equality rows with negative right-hand side", S, double,
                   Rational) {
  LinearProgram<S> lp;
  lp.sense = Sense::Maximize;
  lp.objective = {S{1}, S{0}};
  lp.bounds = {VarBounds<S>::free_var(), VarBounds<S>::free_var()};
  lp.rows.push_back({{S{1}, S{1}}, Relation::Equal, S{-2}});
  lp.rows.push_back({{S{1}, S{-1}}, Relation::LessEq, S{0}});
  auto res = solve_lp(lp);
  REQUIRE(res.status == LPStatus::Optimal);
  CHECK(res.value == S{-1});
  CHECK(verify_optimality(lp, res));
}
