#include "rgen/export.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rgen;

namespace {

Family parse_family(const std::string& name)
{
  if (auto f = family_from_string(name))
    return *f;
  throw py::value_error("unknown family '" + name + "'");
}

py::dict port_dict(const PortValue& v)
{
  py::dict d;
  d["value"] = v.value;
  d["bits"] = v.bits;
  if (v.d1) {
    d["zero_flag"] = v.d1->zero_flag;
    d["magnitude"] = v.d1->magnitude;
  }
  return d;
}

py::dict cost_dict(const CostReport& c)
{
  py::dict d;
  d["fa"] = c.fa_count;
  d["ha"] = c.ha_count;
  d["and"] = c.and_count;
  d["or"] = c.or_count;
  d["not"] = c.not_count;
  d["const"] = c.const_count;
  d["depth"] = c.depth;
  return d;
}

py::dict verdict_dict(const Verdict& v)
{
  py::dict d;
  d["pass"] = v.pass;
  d["counterexample"] = v.counterexample ? py::cast(*v.counterexample) : py::none();
  d["detail"] = v.detail;
  d["evaluated"] = v.evaluated;
  d["sampler"] = v.sampler;
  return d;
}

} // namespace

PYBIND11_MODULE(_rgen, m)
{
  m.doc() = "Residue generator netlists for 2^n-1, 2^n+1 and diminished-one outputs.";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<NetlistError>(m, "NetlistError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("residue", [](std::uint64_t x, unsigned n, const std::string& kind) {
    if (kind == "mersenne")
      return oracle_residue(x, Modulus::mersenne(n));
    if (kind == "fermat")
      return oracle_residue(x, Modulus::fermat(n));
    throw py::value_error("kind must be 'mersenne' or 'fermat'");
  }, py::arg("x"), py::arg("n"), py::arg("kind"));

  m.def("d1_encode", [](std::uint64_t x, unsigned n) {
    const D1Value v = d1_encode(x, n);
    return std::pair{v.zero_flag, v.magnitude};
  }, py::arg("x"), py::arg("n"));
  m.def("d1_decode", [](bool zero_flag, std::uint64_t magnitude, unsigned n) {
    return d1_decode({zero_flag, magnitude}, n);
  }, py::arg("zero_flag"), py::arg("magnitude"), py::arg("n"));

  py::class_<Generated>(m, "Generator")
      .def_property_readonly("p", [](const Generated& g) { return g.report.p; })
      .def_property_readonly("n", [](const Generated& g) { return g.report.n; })
      .def_property_readonly("family",
                             [](const Generated& g) { return std::string(to_string(g.report.family)); })
      .def_property_readonly("outputs", [](const Generated& g) {
        std::vector<std::string> names;
        for (const OutputPort& port : g.netlist.outputs())
          names.push_back(port.name);
        return names;
      })
      .def("evaluate", [](const Generated& g, std::uint64_t x) {
        py::dict out;
        for (const PortValue& v : evaluate(g.netlist, x))
          out[py::str(v.name)] = port_dict(v);
        return out;
      }, py::arg("x"))
      .def("cost", [](const Generated& g) { return cost_dict(g.report.cost); })
      .def("report_json", [](const Generated& g) { return report_to_json(g.report).dump(); })
      .def("report_text", [](const Generated& g) { return report_to_text(g.report); })
      .def("tables", [](const Generated& g) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const StageTable& t : g.report.tables)
          out.emplace_back(t.label, render_shorthand(t.table));
        return out;
      })
      .def("to_json", [](const Generated& g) { return export_json(g.netlist); })
      .def("to_hdl", [](const Generated& g, const std::string& module) {
        return export_hdl(g.netlist, module);
      }, py::arg("module") = "");

  m.def("generate", [](unsigned p, unsigned n, const std::string& family) {
    return build({p, n, parse_family(family)});
  }, py::arg("p"), py::arg("n"), py::arg("family") = "universal-d1");

  m.def("verify", [](unsigned p, unsigned n, const std::string& family, const std::string& mode,
                     std::uint64_t samples, std::uint64_t seed, std::optional<std::uint64_t> budget) {
    SweepPlan plan;
    plan.spec = {p, n, parse_family(family)};
    if (mode == "exhaustive")
      plan.mode = SweepMode::Exhaustive;
    else if (mode == "random")
      plan.mode = SweepMode::Random;
    else
      throw py::value_error("mode must be 'exhaustive' or 'random'");
    plan.samples = samples;
    plan.seed = seed;
    plan.budget = budget.value_or(exhaustive_budget());
    Verdict v;
    {
      py::gil_scoped_release release;
      v = run_sweep(plan);
    }
    return verdict_dict(v);
  }, py::arg("p"), py::arg("n"), py::arg("family") = "universal-d1",
     py::arg("mode") = "exhaustive", py::arg("samples") = 1000000, py::arg("seed") = 42,
     py::arg("budget") = py::none());

  m.def("compare_sharing", [](unsigned p, unsigned n) {
    const SharingComparison c = compare_sharing(p, n);
    py::dict d;
    d["universal_d1"] = cost_dict(c.universal_d1);
    d["classic_mersenne"] = cost_dict(c.classic_mersenne);
    d["bi_residue"] = cost_dict(c.bi_residue);
    d["front_end_fa"] = c.front_end_fa;
    d["saved_fa"] = c.saved_fa;
    d["saved_ha"] = c.saved_ha;
    d["expected_saving"] = c.expected_saving;
    return d;
  }, py::arg("p"), py::arg("n"));
}
