#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "infoval/io.hpp"
#include "infoval/render.hpp"
#include "infoval/verify.hpp"

namespace py = pybind11;
using namespace infoval;

namespace {

// The module speaks JSON text in both directions, reusing the same document
// schemas as the command-line tool and the exact/float dispatch of the
// library templates.

template <typename F>
auto with_mode(const std::string& mode, F&& f) {
  if (mode == "exact") return f(Rational{});
  if (mode == "float") return f(double{});
  throw input_error("mode must be 'float' or 'exact'");
}

template <typename S>
std::vector<S> parse_prior_coords(const std::string& text,
                                  std::size_t num_states) {
  std::vector<S> coords;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ','))
    coords.push_back(scalar_from_text<S>(token));
  if (coords.size() != num_states)
    throw input_error("prior has " + std::to_string(coords.size()) +
                      " coordinates, expected " + std::to_string(num_states));
  make_belief<S>(coords);
  return coords;
}

std::string analyze(const std::string& problem_text, const std::string& mode) {
  return with_mode(mode, [&](auto tag) {
    using S = decltype(tag);
    auto [d, states] = problem_from_json<S>(parse_document(problem_text));
    Json doc;
    doc["problem"] = problem_to_json(d, states);
    doc["subdivision"] = subdivision_to_json(subdivision(d));
    return dump_canonical(doc);
  });
}

std::string compare(const std::string& original_text,
                    const std::string& transformed_text,
                    const std::vector<std::string>& priors,
                    const std::string& mode) {
  return with_mode(mode, [&](auto tag) {
    using S = decltype(tag);
    auto [d, states] = problem_from_json<S>(parse_document(original_text));
    auto [dhat, states_hat] =
        problem_from_json<S>(parse_document(transformed_text));
    if (states != states_hat)
      throw input_error("the two problems name different states");
    std::vector<std::vector<S>> parsed;
    for (const auto& p : priors)
      parsed.push_back(parse_prior_coords<S>(p, d.num_states));
    return dump_canonical(verdict_to_json(classify_transformation(d, dhat, parsed)));
  });
}

std::string acquire(const std::string& problem_text,
                    const std::string& cost_text, const std::string& prior,
                    std::size_t grid_resolution, const std::string& mode) {
  return with_mode(mode, [&](auto tag) {
    using S = decltype(tag);
    auto [d, states] = problem_from_json<S>(parse_document(problem_text));
    const auto cost = cost_from_json<S>(parse_document(cost_text));
    const auto mu0 = parse_prior_coords<S>(prior, d.num_states);
    const auto sol = solve_acquisition(d, cost, mu0, grid_resolution);
    return dump_canonical(acquisition_to_json(sol, grid_resolution));
  });
}

std::string screen(const std::string& instance_text,
                   std::size_t grid_resolution, const std::string& mode) {
  return with_mode(mode, [&](auto tag) {
    using S = decltype(tag);
    const auto inst =
        screening_instance_from_json<S>(parse_document(instance_text));
    const auto sol = screening_solve(inst, grid_resolution);
    return dump_canonical(screening_solution_to_json(sol, grid_resolution));
  });
}

std::string synth_cost(const std::string& problem_text,
                       const std::string& distribution_text,
                       const std::string& prior, const std::string& mode) {
  return with_mode(mode, [&](auto tag) {
    using S = decltype(tag);
    auto [d, states] = problem_from_json<S>(parse_document(problem_text));
    const auto phi =
        distribution_from_json<S>(parse_document(distribution_text));
    const auto mu0 = prior.empty()
                         ? phi.mean()
                         : parse_prior_coords<S>(prior, d.num_states);
    return dump_canonical(cost_to_json(synthesize_cost(d, phi, mu0)));
  });
}

std::string run_suite_report(const std::string& name, std::uint64_t seed) {
  return dump_canonical(suite_report(run_suite(name, seed)));
}

std::string value_curve(const std::string& problem_text, std::size_t samples) {
  const auto d = problem_from_json<double>(parse_document(problem_text)).first;
  return value_curve_csv(d, samples);
}

std::string value_figure(const std::string& problem_text) {
  const auto d = problem_from_json<double>(parse_document(problem_text)).first;
  return value_function_svg(d);
}

std::string subdivision_figure(const std::string& problem_text) {
  const auto d = problem_from_json<double>(parse_document(problem_text)).first;
  return subdivision_svg(subdivision(d));
}

}  // namespace

PYBIND11_MODULE(infoval, m) {
  m.doc() =
      "Value functions, belief-simplex subdivisions, information "
      "comparisons, and costly information acquisition for finite decision "
      "problems. Functions exchange JSON text in the same schemas as the "
      "command-line tool; mode is 'float' or 'exact'.";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<inapplicable_error>(m, "InapplicableError",
                                             PyExc_ValueError);
  py::register_exception<numeric_error>(m, "NumericError",
                                        PyExc_RuntimeError);

  m.def("analyze", &analyze, py::arg("problem"), py::arg("mode") = "float",
        "Subdivision report for a problem document.");
  m.def("compare", &compare, py::arg("original"), py::arg("transformed"),
        py::arg("priors") = std::vector<std::string>{},
        py::arg("mode") = "float",
        "Transformation verdict between two problem documents.");
  m.def("acquire", &acquire, py::arg("problem"), py::arg("cost"),
        py::arg("prior"), py::arg("grid_resolution") = 400,
        py::arg("mode") = "float",
        "Optimal information acquisition at a prior.");
  m.def("screen", &screen, py::arg("instance"),
        py::arg("grid_resolution") = 400, py::arg("mode") = "float",
        "Two-type menu pricing for an instance document.");
  m.def("synth_cost", &synth_cost, py::arg("problem"), py::arg("distribution"),
        py::arg("prior") = "", py::arg("mode") = "float",
        "Cost document making the target distribution optimal.");
  m.def("run_suite", &run_suite_report, py::arg("name"),
        py::arg("seed") = 8211, "Run one property suite, returning its report.");
  m.def("suite_names", [] { return suite_names(); },
        "Names of the property suites in reporting order.");
  m.def("value_curve_csv", &value_curve, py::arg("problem"),
        py::arg("samples") = 200, "CSV of a two-state value function.");
  m.def("value_function_svg", &value_figure, py::arg("problem"),
        "SVG figure of a two-state value function.");
  m.def("subdivision_svg", &subdivision_figure, py::arg("problem"),
        "SVG figure of a three-state subdivision.");
}
