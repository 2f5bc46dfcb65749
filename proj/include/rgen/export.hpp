#pragma once

// Netlist and report serializers.
//
// JSON netlist schema (all arrays LSB-first, gates in topological order):
//   { "meta":    {"family", "p", "n", "cor"},
//     "inputs":  [wire, ...],
//     "gates":   [{"id", "kind", "in": [signal...], "out": [wire...]}],
//     "outputs": {"<port>": {"kind": "plain", "bits": [signal...], "correction"}
//                 | {"kind": "d1", "x_z": signal, "mag": [signal...]}} }
// A signal is {"wire", "inv", "class"}.

#include "rgen/generators.hpp"
#include "rgen/verify.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace rgen {

using Json = nlohmann::ordered_json;

Json netlist_to_json(const Netlist& nl);
Netlist netlist_from_json(const Json& j);

std::string export_json(const Netlist& nl);
Netlist import_json(const std::string& text);

/// Flat structural Verilog: primitive modules rg_fa / rg_ha built from gate
/// primitives, one instance per gate, explicit `not` for inverted reads and
/// supply nets for constants. Ports: x[p-1:0], then r[...] for plain outputs
/// or x_z and mag[n-1:0] for the D1 output.
std::string export_hdl(const Netlist& nl, const std::string& module_name = "");

Json cost_to_json(const CostReport& c);
Json report_to_json(const BuildReport& r);
Json verdict_to_json(const Verdict& v);
std::string report_to_text(const BuildReport& r);

} // namespace rgen
