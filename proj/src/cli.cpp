#include "infoval/cli.hpp"

#include "infoval/io.hpp"
#include "infoval/render.hpp"
#include "infoval/verify.hpp"

#include <filesystem>
#include <ostream>
#include <sstream>

namespace infoval {
namespace {

namespace fs = std::filesystem;

std::size_t default_grid(std::size_t num_states) {
  if (num_states == 2) return 400;
  if (num_states == 3) return 60;
  return 20;
}

std::size_t pick_grid(const RunConfig& cfg, std::size_t num_states) {
  return cfg.grid ? cfg.grid : default_grid(num_states);
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.out_dir) / name).string();
}

Json envelope(const RunConfig& cfg) {
  Json doc;
  doc["command"] = cfg.command;
  doc["mode"] = cfg.mode;
  doc["seed"] = cfg.seed;
  doc["inputs"] = cfg.inputs;
  return doc;
}

void require_inputs(const RunConfig& cfg, std::size_t count,
                    const std::string& what) {
  if (cfg.inputs.size() != count)
    throw input_error(cfg.command + " expects " + what);
}

template <typename S>
std::vector<S> parse_prior(const std::string& text, std::size_t num_states) {
  std::vector<S> coords;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ','))
    coords.push_back(scalar_from_text<S>(token));
  if (coords.size() != num_states)
    throw input_error("prior '" + text + "' has " +
                      std::to_string(coords.size()) +
                      " coordinates, expected " + std::to_string(num_states));
  make_belief<S>(coords);
  return coords;
}

void emit(const RunConfig& cfg, const std::string& name, const Json& doc,
          std::ostream& out) {
  const auto path = out_path(cfg, name);
  write_text_atomic(path, dump_canonical(doc));
  out << "wrote " << path << "\n";
}

void emit_text(const RunConfig& cfg, const std::string& name,
               const std::string& content, std::ostream& out) {
  const auto path = out_path(cfg, name);
  write_text_atomic(path, content);
  out << "wrote " << path << "\n";
}

/// Double copy of an exact problem for rendering, via the serialized form so
/// number conversion stays in one place.
template <typename S>
DecisionProblem<double> render_copy(const DecisionProblem<S>& d) {
  return problem_from_json<double>(problem_to_json(d)).first;
}

template <typename S>
UPSCost<double> render_copy(const UPSCost<S>& c) {
  return cost_from_json<double>(cost_to_json(c));
}

std::string yes_no(bool v) { return v ? "yes" : "no"; }

template <typename S>
int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 1, "one problem file");
  auto [d, states] = problem_from_json<S>(load_json_file(cfg.inputs[0]));
  const auto sub = subdivision(d);
  const auto stem = stem_of(cfg.inputs[0]);

  Json doc = envelope(cfg);
  doc["problem"] = problem_to_json(d, states);
  doc["subdivision"] = subdivision_to_json(sub);

  if (d.num_states == 2) {
    const auto dd = render_copy(d);
    emit_text(cfg, stem + "-value.csv", value_curve_csv(dd), out);
    emit_text(cfg, stem + "-value.svg", value_function_svg(dd), out);
  } else if (d.num_states == 3) {
    const auto dd = render_copy(d);
    emit_text(cfg, stem + "-subdivision.svg", subdivision_svg(subdivision(dd)),
              out);
  } else {
    doc["notice"] = "figures are rendered for 2 or 3 states only";
  }
  emit(cfg, stem + "-subdivision.json", doc, out);

  out << "states: " << d.num_states << ", actions: " << d.actions.size()
      << ", cells: " << sub.cells.size() << "\n";
  for (const auto& cell : sub.cells) {
    out << "  cell";
    for (const auto& l : cell.labels) out << " " << l;
    out << "\n";
  }
  return 0;
}

template <typename S>
int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2, "an original and a transformed problem file");
  auto [d, states] = problem_from_json<S>(load_json_file(cfg.inputs[0]));
  auto [dhat, states_hat] = problem_from_json<S>(load_json_file(cfg.inputs[1]));
  if (states != states_hat)
    throw input_error("the two problems name different states");
  std::vector<std::vector<S>> priors;
  for (const auto& p : cfg.priors)
    priors.push_back(parse_prior<S>(p, d.num_states));

  const auto verdict = classify_transformation(d, dhat, priors);

  Json doc = envelope(cfg);
  doc["original"] = problem_to_json(d, states);
  doc["transformed"] = problem_to_json(dhat, states);
  doc["verdict"] = verdict_to_json(verdict);
  emit(cfg, stem_of(cfg.inputs[1]) + "-verdict.json", doc, out);

  out << "difference of value functions convex: "
      << yes_no(verdict.convex_difference) << "\n";
  out << "transformed subdivision refines the original: "
      << yes_no(verdict.refines) << "\n";
  out << "greater value for information at every prior: "
      << yes_no(verdict.greater_value_free_prior) << "\n";
  if (verdict.nonconvexity_witness)
    out << "nonconvexity witness violation: "
        << scalar_to_json(verdict.nonconvexity_witness->violation).dump()
        << "\n";
  if (verdict.added_totally_refining)
    out << "added actions totally refining: "
        << yes_no(*verdict.added_totally_refining) << "\n";
  if (verdict.removed_totally_refining_wrt_new)
    out << "removed actions totally refining for the trimmed problem: "
        << yes_no(*verdict.removed_totally_refining_wrt_new) << "\n";
  for (const auto& r : verdict.prior_reports) {
    out << "prior " << vector_to_json(r.prior).dump()
        << ": shift-majorizes: " << yes_no(r.shift_majorizes);
    if (!r.shift_majorizes)
      out << ", envelope gap " << scalar_to_json(r.envelope_gap).dump();
    out << "\n";
  }
  return 0;
}

template <typename S>
int cmd_acquire(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2, "a problem file and a cost file");
  auto [d, states] = problem_from_json<S>(load_json_file(cfg.inputs[0]));
  const auto cost = cost_from_json<S>(load_json_file(cfg.inputs[1]));
  if (cfg.priors.size() != 1)
    throw input_error("acquire expects exactly one --prior");
  const auto prior = parse_prior<S>(cfg.priors[0], d.num_states);
  const std::size_t resolution = pick_grid(cfg, d.num_states);

  const auto sol = solve_acquisition(d, cost, prior, resolution);

  Json doc = envelope(cfg);
  doc["grid_resolution"] = resolution;
  doc["problem"] = problem_to_json(d, states);
  doc["cost"] = cost_to_json(cost);
  doc["prior"] = vector_to_json(prior);
  doc["solution"] = acquisition_to_json(sol, resolution);
  const auto stem = stem_of(cfg.inputs[0]);
  emit(cfg, stem + "-acquisition.json", doc, out);
  if (d.num_states == 2)
    emit_text(cfg, stem + "-objective.csv",
              objective_curve_csv(render_copy(d), render_copy(cost)), out);

  out << "net value: " << scalar_to_json(sol.net_value).dump() << "\n";
  for (const auto& [b, w] : sol.distribution.support)
    out << "  posterior " << vector_to_json(b.p).dump() << " weight "
        << scalar_to_json(w).dump() << "\n";
  return 0;
}

template <typename S>
int cmd_screen(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 1, "one screening instance file");
  const auto inst =
      screening_instance_from_json<S>(load_json_file(cfg.inputs[0]));
  const std::size_t resolution = pick_grid(cfg, inst.high.num_states);
  const auto sol = screening_solve(inst, resolution);

  Json doc = envelope(cfg);
  doc["instance"] = screening_instance_to_json(inst);
  doc["solution"] = screening_solution_to_json(sol, resolution);
  emit(cfg, stem_of(cfg.inputs[0]) + "-screening.json", doc, out);

  out << "first-best prices: high "
      << scalar_to_json(sol.high_price_fb).dump() << ", low "
      << scalar_to_json(sol.low_price_fb).dump() << "\n";
  out << "second-best prices: high "
      << scalar_to_json(sol.high_price_sb).dump() << ", low "
      << scalar_to_json(sol.low_price_sb).dump() << "\n";
  out << "distorted low experiment is a contraction of its first best: "
      << yes_no(sol.low_sb_mpc_of_fb) << "\n";
  return 0;
}

template <typename S>
int cmd_synth_cost(const RunConfig& cfg, std::ostream& out) {
  require_inputs(cfg, 2, "a problem file and a target distribution file");
  auto [d, states] = problem_from_json<S>(load_json_file(cfg.inputs[0]));
  const auto phi = distribution_from_json<S>(load_json_file(cfg.inputs[1]));
  std::vector<S> prior;
  if (cfg.priors.empty())
    prior = phi.mean();
  else if (cfg.priors.size() == 1)
    prior = parse_prior<S>(cfg.priors[0], d.num_states);
  else
    throw input_error("synth-cost expects at most one --prior");

  const auto cost = synthesize_cost(d, phi, prior);
  const Json cost_doc = cost_to_json(cost);
  const auto stem = stem_of(cfg.inputs[1]);
  emit(cfg, stem + "-cost.json", cost_doc, out);

  Json doc = envelope(cfg);
  doc["problem"] = problem_to_json(d, states);
  doc["distribution"] = distribution_to_json(phi);
  doc["prior"] = vector_to_json(prior);
  doc["cost"] = cost_doc;
  emit(cfg, stem + "-synthesis.json", doc, out);

  out << "synthesized a " << cost_doc["family"].get<std::string>()
      << " cost with " << cost_doc["pieces"].size() << " pieces\n";
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::vector<std::string> names;
  if (cfg.suite == "all")
    names = suite_names();
  else
    names.push_back(cfg.suite);

  bool all_pass = true;
  for (const auto& name : names) {
    const auto result = run_suite(name, cfg.seed);
    Json doc = envelope(cfg);
    doc["report"] = suite_report(result);
    emit(cfg, name + "-report.json", doc, out);
    out << name << ": " << (result.pass ? "pass" : "FAIL") << " ("
        << result.trials << " trials, " << result.failures << " failures)\n";
    if (!result.pass) {
      all_pass = false;
      if (result.details.contains("first_failure"))
        out << "  " << result.details["first_failure"].get<std::string>()
            << "\n";
    }
  }
  return all_pass ? 0 : 4;
}

template <typename S>
int dispatch(const RunConfig& cfg, std::ostream& out) {
  if (cfg.command == "analyze") return cmd_analyze<S>(cfg, out);
  if (cfg.command == "compare") return cmd_compare<S>(cfg, out);
  if (cfg.command == "acquire") return cmd_acquire<S>(cfg, out);
  if (cfg.command == "screen") return cmd_screen<S>(cfg, out);
  if (cfg.command == "synth-cost") return cmd_synth_cost<S>(cfg, out);
  throw input_error("unknown command: " + cfg.command);
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.mode != "float" && cfg.mode != "exact")
      throw input_error("mode must be 'float' or 'exact'");
    if (!fs::exists(cfg.out_dir) || !fs::is_directory(cfg.out_dir))
      throw input_error("output directory does not exist: " + cfg.out_dir);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.mode == "exact") return dispatch<Rational>(cfg, out);
    return dispatch<double>(cfg, out);
  } catch (const input_error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const inapplicable_error& e) {
    err << "inapplicable: " << e.what() << "\n";
    return 3;
  } catch (const numeric_error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace infoval
