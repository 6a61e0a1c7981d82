#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bss/error.hpp"
#include "bss/manifest.hpp"
#include "bss/nondet.hpp"
#include "bss/nu.hpp"
#include "bss/parser.hpp"
#include "bss/report.hpp"
#include "bss/transform.hpp"

namespace py = pybind11;
using namespace bss;

namespace {

// A bound machine plus the manifest it came from (budget, guess source).
struct PyMachine {
  MachineSpec spec;
  Manifest manifest;
};

Manifest manifest_of(const std::string& manifest_json, const std::string& base_dir) {
  return manifest_json.empty() ? default_manifest() : parse_manifest(manifest_json, base_dir);
}

PyMachine from_text(const std::string& text, const std::string& manifest_json, const std::string& base_dir,
                    const std::string& kind) {
  PyMachine m;
  m.manifest = manifest_of(manifest_json, base_dir);
  if (kind == "nd") m.manifest.kind = MachineKind::ND;
  else if (kind == "deterministic") m.manifest.kind = MachineKind::Deterministic;
  else if (kind == "nu") m.manifest.kind = MachineKind::NuOracle;
  else if (!kind.empty()) throw Error(ErrorKind::InvalidArgument, "unknown kind " + kind);
  m.spec = bind(m.manifest, load_program(text, *m.manifest.structure));
  return m;
}

PyMachine derived(const PyMachine& src, MachineSpec spec) {
  PyMachine m{std::move(spec), src.manifest};
  m.manifest.kind = m.spec.kind;
  m.manifest.oracle = m.spec.oracle;
  return m;
}

Budget budget_of(const PyMachine& m, std::optional<std::size_t> max_steps) {
  Budget b = m.manifest.budget;
  if (max_steps) b.max_steps = *max_steps;
  return b;
}

std::string run_json(const PyMachine& m, const std::string& input, std::optional<std::string> guesses,
                     std::optional<std::size_t> max_steps) {
  const Structure& s = *m.spec.structure;
  Budget b = budget_of(m, max_steps);
  RunResult r;
  if (guesses) {
    r = run_with_guesses(m.spec, parse_tuple(s, input), parse_tuple(s, *guesses), b);
  } else {
    std::unique_ptr<NuEvaluator> nu;
    if (m.spec.oracle) nu = make_evaluator(m.spec, b);
    r = run(m.spec, parse_tuple(s, input), b, nu.get());
  }
  return to_json(s, r).dump();
}

std::string enumerate_json(const PyMachine& m, const std::string& input, std::optional<std::size_t> max_len,
                           std::optional<std::size_t> max_index, std::optional<std::size_t> max_steps) {
  GuessSource g = m.manifest.guesses;
  if (max_len || max_index) {
    EnumeratorDovetail d = std::holds_alternative<EnumeratorDovetail>(g) ? std::get<EnumeratorDovetail>(g)
                                                                          : EnumeratorDovetail{};
    if (max_len) d.max_len = *max_len;
    if (max_index) d.max_index = *max_index;
    g = d;
  }
  const Structure& s = *m.spec.structure;
  return to_json(s, enumerate_results(m.spec, parse_tuple(s, input), g, budget_of(m, max_steps))).dump();
}

SpecialCase special_of(const std::string& c) {
  if (c == "a1") return SpecialCase::A1;
  if (c == "a2") return SpecialCase::A2;
  if (c == "a3") return SpecialCase::A3;
  throw Error(ErrorKind::InvalidArgument, "special case must be a1, a2 or a3");
}

}  // namespace

PYBIND11_MODULE(_bssram, mod) {
  mod.doc() = "BSS RAM machines over first-order structures";
  static py::exception<Error> exc(mod, "BssError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      exc((std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<PyMachine>(mod, "Machine")
      .def_static("from_text", &from_text, py::arg("text"), py::arg("manifest") = "", py::arg("base_dir") = "",
                  py::arg("kind") = "")
      .def_property_readonly("kind", [](const PyMachine& m) { return std::string(to_string(m.spec.kind)); })
      .def_property_readonly("tapes", [](const PyMachine& m) { return m.spec.tapes; })
      .def("__len__", [](const PyMachine& m) { return m.spec.program.size(); })
      .def("program", [](const PyMachine& m) { return render_program(m.spec.program); })
      .def("validate",
           [](const PyMachine& m) {
             std::vector<std::string> out;
             for (const auto& d : validate(m.spec))
               out.push_back(std::string(to_string(d.kind)) + " at " + std::to_string(d.label) + ": " + d.message);
             return out;
           })
      .def("_run", &run_json, py::arg("input"), py::arg("guesses") = std::nullopt,
           py::arg("max_steps") = std::nullopt)
      .def("_enumerate", &enumerate_json, py::arg("input"), py::arg("max_len") = std::nullopt,
           py::arg("max_index") = std::nullopt, py::arg("max_steps") = std::nullopt)
      .def("semidecides",
           [](const PyMachine& m, const std::string& input) {
             auto v = semidecides(m.spec, parse_tuple(*m.spec.structure, input), m.manifest.guesses, m.manifest.budget);
             return v == Verdict::Accepted;
           })
      .def("compile_nu_to_nd", [](const PyMachine& m) { return derived(m, compile_nu_to_nd(m.spec)); })
      .def("compile_nd_to_nu", [](const PyMachine& m) { return derived(m, compile_nd_to_nu(m.spec)); })
      .def("compile_special",
           [](const PyMachine& m, const std::string& c) { return derived(m, compile_special(m.spec, special_of(c))); })
      .def("flatten", [](const PyMachine& m) { return derived(m, flatten_tapes(m.spec)); })
      .def("to_semidecider", [](const PyMachine& m) { return derived(m, decider_to_semidecider(m.spec)); });

  mod.def(
      "nu_eval",
      [](const std::string& manifest_json, const std::string& prefix, const std::string& base_dir) {
        Manifest m = parse_manifest(manifest_json, base_dir);
        if (!m.oracle) throw Error(ErrorKind::UnresolvedOracle, "manifest has no oracle");
        auto nu = make_evaluator(*m.oracle, m.structure, m.budget);
        auto c = nu->choose(parse_tuple(*m.structure, prefix));
        std::vector<std::string> vals;
        for (const auto& v : c.candidates) vals.push_back(m.structure->format_value(v));
        return std::make_pair(vals, c.complete);
      },
      py::arg("manifest"), py::arg("prefix"), py::arg("base_dir") = "");
  mod.def("render", [](const std::string& text) { return render_ext(parse_program(text)); });
  mod.def("cantor_encode", &cantor_encode);
  mod.def("cantor_decode", &cantor_decode);
  mod.def("cantor_decode_plus", &cantor_decode_plus);
}
