#pragma once

#include "infoval/acquisition.hpp"
#include "infoval/compare.hpp"
#include "infoval/decision.hpp"
#include "infoval/scalar.hpp"
#include "infoval/transforms.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace infoval {

using Json = nlohmann::ordered_json;

/// Parse JSON text, reporting failures with line and column.
inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    if (offset > text.size()) offset = text.size();
    std::size_t line = 1, last_break = 0;
    for (std::size_t i = 0; i < offset; ++i)
      if (text[i] == '\n') {
        ++line;
        last_break = i + 1;
      }
    const std::size_t column = offset - last_break + 1;
    std::string detail = e.what();
    const auto cut = detail.rfind("syntax error");
    if (cut != std::string::npos) detail = detail.substr(cut);
    std::ostringstream msg;
    msg << "JSON parse error at line " << line << ", column " << column << ": "
        << detail;
    throw input_error(msg.str());
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

/// Canonical dump: insertion-ordered keys, two-space indent, trailing newline.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text_atomic(const std::string& path,
                              const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw input_error("cannot write file: " + tmp);
    out << content;
    if (!out) throw input_error("short write to file: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

inline Json scalar_to_json(double v) {
  if (!std::isfinite(v)) throw numeric_error("non-finite number in a report");
  return Json(round_for_report(v));
}

/// Rationals serialize as plain integers when they fit in 64 bits and as
/// exact "p/q" strings otherwise.
inline Json scalar_to_json(const Rational& v) {
  if (denominator(v) == 1) {
    static const Rational lo{std::numeric_limits<std::int64_t>::min()};
    static const Rational hi{std::numeric_limits<std::int64_t>::max()};
    if (v >= lo && v <= hi)
      return Json(numerator(v).convert_to<std::int64_t>());
  }
  return Json(format_rational(v));
}

template <typename S>
S scalar_from_json(const Json& j) {
  if (j.is_string()) {
    const Rational r = parse_rational(j.get<std::string>());
    if constexpr (std::is_same_v<S, Rational>)
      return r;
    else
      return r.convert_to<double>();
  }
  if (j.is_number_integer()) {
    if constexpr (std::is_same_v<S, Rational>)
      return Rational(j.get<std::int64_t>());
    else
      return static_cast<double>(j.get<std::int64_t>());
  }
  if (j.is_number()) {
    if constexpr (std::is_same_v<S, Rational>)
      return rational_from_double(j.get<double>());
    else
      return j.get<double>();
  }
  throw input_error("expected a number or rational string, got: " + j.dump());
}

template <typename S>
S scalar_from_text(const std::string& text) {
  const Rational r = parse_rational(text);
  if constexpr (std::is_same_v<S, Rational>)
    return r;
  else
    return r.convert_to<double>();
}

template <typename S>
std::vector<S> vector_from_json(const Json& j) {
  if (!j.is_array()) throw input_error("expected an array of numbers");
  std::vector<S> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(scalar_from_json<S>(e));
  return out;
}

template <typename S>
Json vector_to_json(const std::vector<S>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(scalar_to_json(x));
  return out;
}

inline std::vector<std::string> default_state_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    names.push_back("s" + std::to_string(i + 1));
  return names;
}

template <typename S>
Json problem_to_json(const DecisionProblem<S>& d,
                     std::vector<std::string> states = {}) {
  if (states.empty()) states = default_state_names(d.num_states);
  if (states.size() != d.num_states)
    throw input_error("state name count does not match the problem");
  Json doc;
  doc["states"] = states;
  Json actions = Json::array();
  for (const auto& a : d.actions) {
    Json row;
    row["label"] = a.label;
    row["payoffs"] = vector_to_json(a.payoffs);
    actions.push_back(std::move(row));
  }
  doc["actions"] = std::move(actions);
  return doc;
}

template <typename S>
std::pair<DecisionProblem<S>, std::vector<std::string>> problem_from_json(
    const Json& j) {
  if (!j.is_object()) throw input_error("problem document must be an object");
  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty())
    throw input_error("problem document needs a nonempty 'states' array");
  std::vector<std::string> states;
  for (const auto& s : j["states"]) {
    if (!s.is_string()) throw input_error("state names must be strings");
    states.push_back(s.get<std::string>());
  }
  if (!j.contains("actions") || !j["actions"].is_array())
    throw input_error("problem document needs an 'actions' array");
  std::vector<Action<S>> actions;
  for (const auto& a : j["actions"]) {
    if (!a.is_object() || !a.contains("label") || !a["label"].is_string())
      throw input_error("each action needs a string 'label'");
    if (!a.contains("payoffs"))
      throw input_error("each action needs a 'payoffs' array");
    Action<S> act;
    act.label = a["label"].get<std::string>();
    act.payoffs = vector_from_json<S>(a["payoffs"]);
    if (act.payoffs.size() != states.size())
      throw input_error("payoff count differs from state count for action " +
                        act.label);
    actions.push_back(std::move(act));
  }
  return {make_problem<S>(states.size(), std::move(actions)),
          std::move(states)};
}

template <typename S>
Json cost_to_json(const UPSCost<S>& c) {
  Json doc;
  switch (c.family) {
    case UPSCost<S>::Family::ScaledEntropy:
      doc["family"] = "entropy";
      doc["scale"] = scalar_to_json(c.entropy_scale);
      return doc;
    case UPSCost<S>::Family::Quadratic: {
      doc["family"] = "quadratic";
      Json rows = Json::array();
      for (const auto& r : c.quadratic) rows.push_back(vector_to_json(r));
      doc["matrix"] = std::move(rows);
      return doc;
    }
    case UPSCost<S>::Family::MaxParaboloid: {
      doc["family"] = "paraboloid";
      Json pieces = Json::array();
      for (const auto& p : c.pieces) {
        Json row;
        row["alpha"] = vector_to_json(p.alpha);
        row["beta"] = scalar_to_json(p.beta);
        row["eps"] = scalar_to_json(p.eps);
        row["anchor"] = vector_to_json(p.anchor);
        pieces.push_back(std::move(row));
      }
      doc["pieces"] = std::move(pieces);
      return doc;
    }
    case UPSCost<S>::Family::AffineShiftOfValue:
      doc["family"] = "shifted_value";
      doc["eps"] = scalar_to_json(c.shift_eps);
      doc["base"] = problem_to_json(*c.base);
      doc["regularizer"] = cost_to_json(*c.regularizer);
      return doc;
  }
  throw input_error("unknown cost family");
}

template <typename S>
UPSCost<S> cost_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw input_error("cost document needs a 'family' string");
  const std::string family = j["family"].get<std::string>();
  if (family == "entropy") {
    if (!j.contains("scale")) throw input_error("entropy cost needs 'scale'");
    return make_entropy_cost<S>(scalar_from_json<S>(j["scale"]));
  }
  if (family == "quadratic") {
    if (!j.contains("matrix") || !j["matrix"].is_array())
      throw input_error("quadratic cost needs a 'matrix' array");
    std::vector<std::vector<S>> rows;
    for (const auto& r : j["matrix"]) rows.push_back(vector_from_json<S>(r));
    return make_quadratic_cost<S>(std::move(rows));
  }
  if (family == "paraboloid") {
    if (!j.contains("pieces") || !j["pieces"].is_array())
      throw input_error("paraboloid cost needs a 'pieces' array");
    std::vector<ParaboloidPiece<S>> pieces;
    for (const auto& p : j["pieces"]) {
      if (!p.is_object() || !p.contains("alpha") || !p.contains("beta") ||
          !p.contains("eps") || !p.contains("anchor"))
        throw input_error("each paraboloid piece needs alpha/beta/eps/anchor");
      ParaboloidPiece<S> piece;
      piece.alpha = vector_from_json<S>(p["alpha"]);
      piece.beta = scalar_from_json<S>(p["beta"]);
      piece.eps = scalar_from_json<S>(p["eps"]);
      piece.anchor = vector_from_json<S>(p["anchor"]);
      pieces.push_back(std::move(piece));
    }
    return make_paraboloid_cost<S>(std::move(pieces));
  }
  if (family == "shifted_value") {
    if (!j.contains("eps") || !j.contains("base") || !j.contains("regularizer"))
      throw input_error("shifted_value cost needs eps/base/regularizer");
    auto base = problem_from_json<S>(j["base"]).first;
    auto reg = cost_from_json<S>(j["regularizer"]);
    return adversarial_cost<S>(std::move(base), scalar_from_json<S>(j["eps"]),
                               std::move(reg));
  }
  throw input_error("unknown cost family: " + family);
}

template <typename S>
Json distribution_to_json(const PosteriorDistribution<S>& phi) {
  Json doc;
  Json support = Json::array();
  for (const auto& [b, w] : phi.support) {
    Json row;
    row["belief"] = vector_to_json(b.p);
    row["weight"] = scalar_to_json(w);
    support.push_back(std::move(row));
  }
  doc["support"] = std::move(support);
  return doc;
}

template <typename S>
PosteriorDistribution<S> distribution_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("support") || !j["support"].is_array())
    throw input_error("distribution document needs a 'support' array");
  std::vector<std::pair<Belief<S>, S>> support;
  for (const auto& row : j["support"]) {
    if (!row.is_object() || !row.contains("belief") || !row.contains("weight"))
      throw input_error("each support entry needs 'belief' and 'weight'");
    support.emplace_back(make_belief<S>(vector_from_json<S>(row["belief"])),
                         scalar_from_json<S>(row["weight"]));
  }
  return make_distribution<S>(std::move(support));
}

template <typename S>
Json screening_instance_to_json(const ScreeningInstance<S>& inst) {
  Json doc;
  doc["high"] = problem_to_json(inst.high);
  doc["low"] = problem_to_json(inst.low);
  doc["high_share"] = scalar_to_json(inst.high_share);
  doc["prior"] = vector_to_json(inst.prior);
  doc["cost"] = cost_to_json(inst.cost);
  return doc;
}

template <typename S>
ScreeningInstance<S> screening_instance_from_json(const Json& j) {
  if (!j.is_object()) throw input_error("screening document must be an object");
  for (const char* key : {"high", "low", "high_share", "prior", "cost"})
    if (!j.contains(key))
      throw input_error(std::string("screening document needs '") + key + "'");
  return make_screening_instance<S>(problem_from_json<S>(j["high"]).first,
                                    problem_from_json<S>(j["low"]).first,
                                    scalar_from_json<S>(j["high_share"]),
                                    vector_from_json<S>(j["prior"]),
                                    cost_from_json<S>(j["cost"]));
}

template <typename S>
Json subdivision_to_json(const Subdivision<S>& sub) {
  Json doc;
  doc["num_states"] = sub.num_states;
  Json cells = Json::array();
  for (const auto& c : sub.cells) {
    Json cell;
    cell["labels"] = c.labels;
    cell["payoffs"] = vector_to_json(c.payoffs);
    Json verts = Json::array();
    for (const auto& v : c.region.vertices()) verts.push_back(vector_to_json(v.p));
    cell["vertices"] = std::move(verts);
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  return doc;
}

template <typename S>
Json acquisition_to_json(const AcquisitionSolution<S>& sol,
                         std::size_t grid_resolution) {
  Json doc;
  doc["grid_resolution"] = grid_resolution;
  doc["net_value"] = scalar_to_json(sol.net_value);
  doc["lp_value"] = scalar_to_json(sol.lp_value);
  doc["dual_gap"] = scalar_to_json(sol.dual_gap);
  doc["solution"] = distribution_to_json(sol.distribution);
  return doc;
}

template <typename S>
Json affine_witness_to_json(const AffineWitness<S>& w) {
  Json doc;
  doc["lambda"] = vector_to_json(w.lambda);
  doc["tau"] = scalar_to_json(w.tau);
  return doc;
}

template <typename S>
Json verdict_to_json(const TransformationVerdict<S>& v) {
  Json doc;
  doc["convex_difference"] = v.convex_difference;
  doc["refines"] = v.refines;
  doc["greater_value_free_prior"] = v.greater_value_free_prior;
  if (v.nonconvexity_witness) {
    Json w;
    w["mu"] = vector_to_json(v.nonconvexity_witness->mu);
    w["mu_prime"] = vector_to_json(v.nonconvexity_witness->mu_prime);
    w["lambda_weight"] = scalar_to_json(v.nonconvexity_witness->lambda_weight);
    w["violation"] = scalar_to_json(v.nonconvexity_witness->violation);
    doc["nonconvexity_witness"] = std::move(w);
  } else {
    doc["nonconvexity_witness"] = nullptr;
  }
  if (v.shift_majorizes_at) {
    Json w;
    w["prior"] = vector_to_json(v.shift_majorizes_at->first);
    w["witness"] = affine_witness_to_json(v.shift_majorizes_at->second);
    doc["shift_majorizes_at"] = std::move(w);
  } else {
    doc["shift_majorizes_at"] = nullptr;
  }
  doc["added_totally_refining"] =
      v.added_totally_refining ? Json(*v.added_totally_refining) : Json(nullptr);
  doc["removed_totally_refining_wrt_new"] =
      v.removed_totally_refining_wrt_new
          ? Json(*v.removed_totally_refining_wrt_new)
          : Json(nullptr);
  Json reports = Json::array();
  for (const auto& r : v.prior_reports) {
    Json row;
    row["prior"] = vector_to_json(r.prior);
    row["overlap"] = r.overlap;
    row["some_action_remains_prior_optimal"] =
        r.some_action_remains_prior_optimal;
    row["generic"] = r.generic;
    row["shift_majorizes"] = r.shift_majorizes;
    row["shift_witness"] = r.shift_witness
                               ? affine_witness_to_json(*r.shift_witness)
                               : Json(nullptr);
    row["envelope_gap"] = scalar_to_json(r.envelope_gap);
    row["new_optimal_dominated_by_old"] =
        r.new_optimal_dominated_by_old ? Json(*r.new_optimal_dominated_by_old)
                                       : Json(nullptr);
    reports.push_back(std::move(row));
  }
  doc["prior_reports"] = std::move(reports);
  return doc;
}

template <typename S>
Json screening_solution_to_json(const ScreeningSolution<S>& sol,
                                std::size_t grid_resolution) {
  Json doc;
  doc["grid_resolution"] = grid_resolution;
  doc["high_first_best"] = acquisition_to_json(sol.high_first_best, grid_resolution);
  doc["low_first_best"] = acquisition_to_json(sol.low_first_best, grid_resolution);
  doc["low_second_best"] = acquisition_to_json(sol.low_second_best, grid_resolution);
  doc["high_price_fb"] = scalar_to_json(sol.high_price_fb);
  doc["low_price_fb"] = scalar_to_json(sol.low_price_fb);
  doc["high_price_sb"] = scalar_to_json(sol.high_price_sb);
  doc["low_price_sb"] = scalar_to_json(sol.low_price_sb);
  doc["high_ir_slack"] = scalar_to_json(sol.high_ir_slack);
  doc["low_ic_slack"] = scalar_to_json(sol.low_ic_slack);
  doc["low_sb_mpc_of_fb"] = sol.low_sb_mpc_of_fb;
  doc["low_fb_strict_mpc_of_sb"] = sol.low_fb_strict_mpc_of_sb;
  doc["high_fb_strict_mpc_of_low_fb"] = sol.high_fb_strict_mpc_of_low_fb;
  doc["virtual_optimum_multiple"] = sol.virtual_optimum_multiple;
  return doc;
}

}  // namespace infoval
