#include "rgen/export.hpp"

#include <map>
#include <set>
#include <sstream>

namespace rgen {

namespace {

Json signal_json(const Signal& s) { return {{"wire", s.wire}, {"inv", s.inverted}, {"class", s.weight_class}}; }

Signal signal_from(const Json& j)
{
  return {j.at("wire").get<WireId>(), j.at("inv").get<bool>(), j.value("class", -1)};
}

Json signals_json(const std::vector<Signal>& v)
{
  Json a = Json::array();
  for (const Signal& s : v)
    a.push_back(signal_json(s));
  return a;
}

std::vector<Signal> signals_from(const Json& a)
{
  std::vector<Signal> v;
  for (const auto& s : a)
    v.push_back(signal_from(s));
  return v;
}

} // namespace

Json netlist_to_json(const Netlist& nl)
{
  Json j;
  j["meta"] = {{"family", nl.meta().family},
               {"p", nl.meta().p},
               {"n", nl.meta().n},
               {"cor", nl.meta().cor}};
  j["wires"] = nl.wire_count();
  j["inputs"] = Json::array();
  for (std::size_t i = 0; i < nl.inputs().size(); ++i)
    j["inputs"].push_back(nl.inputs()[i]);
  j["input_classes"] = Json::array();
  for (int c : nl.input_classes())
    j["input_classes"].push_back(c);

  j["gates"] = Json::array();
  std::size_t id = 0;
  for (const Gate& g : nl.gates()) {
    Json jg;
    jg["id"] = id++;
    jg["kind"] = std::string(to_string(g.kind));
    jg["in"] = signals_json(g.inputs);
    jg["out"] = g.outputs;
    j["gates"].push_back(std::move(jg));
  }

  j["outputs"] = Json::object();
  for (const OutputPort& port : nl.outputs()) {
    if (const auto* plain = std::get_if<PlainResidue>(&port.value)) {
      j["outputs"][port.name] = {{"kind", "plain"},
                                 {"bits", signals_json(plain->bits)},
                                 {"correction", plain->correction}};
    } else {
      const auto& d1 = std::get<D1Output>(port.value);
      j["outputs"][port.name] = {
          {"kind", "d1"}, {"x_z", signal_json(d1.zero_flag)}, {"mag", signals_json(d1.magnitude)}};
    }
  }
  return j;
}

Netlist netlist_from_json(const Json& j)
{
  try {
    NetlistMeta meta;
    const Json& jm = j.at("meta");
    meta.family = jm.at("family").get<std::string>();
    meta.p = jm.at("p").get<unsigned>();
    meta.n = jm.at("n").get<unsigned>();
    meta.cor = jm.at("cor").get<std::uint64_t>();

    std::vector<WireId> inputs = j.at("inputs").get<std::vector<WireId>>();
    std::vector<int> classes = j.value("input_classes", std::vector<int>{});

    std::vector<Gate> gates;
    std::size_t max_wire = 0;
    for (WireId w : inputs)
      max_wire = std::max<std::size_t>(max_wire, w + 1);
    for (const auto& jg : j.at("gates")) {
      const auto kind = gate_kind_from_string(jg.at("kind").get<std::string>());
      if (!kind)
        throw NetlistError("unknown gate kind '" + jg.at("kind").get<std::string>() + "'");
      Gate g{*kind, signals_from(jg.at("in")), jg.at("out").get<std::vector<WireId>>()};
      for (WireId w : g.outputs)
        max_wire = std::max<std::size_t>(max_wire, w + 1);
      gates.push_back(std::move(g));
    }

    std::vector<OutputPort> outputs;
    for (const auto& [name, jp] : j.at("outputs").items()) {
      const std::string kind = jp.at("kind").get<std::string>();
      if (kind == "plain")
        outputs.push_back({name, PlainResidue{signals_from(jp.at("bits")),
                                              jp.value("correction", std::uint64_t{0})}});
      else if (kind == "d1")
        outputs.push_back({name, D1Output{signal_from(jp.at("x_z")), signals_from(jp.at("mag"))}});
      else
        throw NetlistError("unknown output kind '" + kind + "'");
    }
    const std::size_t wires = j.value("wires", max_wire);
    return Netlist::assemble(std::move(meta), wires, std::move(inputs), std::move(classes),
                             std::move(gates), std::move(outputs));
  } catch (const nlohmann::json::exception& e) {
    throw NetlistError(std::string("malformed netlist JSON: ") + e.what());
  }
}

std::string export_json(const Netlist& nl) { return netlist_to_json(nl).dump(1) + "\n"; }

Netlist import_json(const std::string& text)
{
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw NetlistError(std::string("malformed netlist JSON: ") + e.what());
  }
  return netlist_from_json(j);
}

// ---------------------------------------------------------------------------
// HDL

std::string export_hdl(const Netlist& nl, const std::string& module_name)
{
  std::string name = module_name;
  if (name.empty()) {
    name = nl.meta().family.empty() ? "netlist" : nl.meta().family;
    for (char& c : name)
      if (c == '-')
        c = '_';
    name = "rg_" + name + "_n" + std::to_string(nl.meta().n) + "_p" + std::to_string(nl.meta().p);
  }

  std::ostringstream os;
  os << "// generated by rgen: family=" << nl.meta().family << " p=" << nl.meta().p
     << " n=" << nl.meta().n << " cor=" << nl.meta().cor << "\n\n";
  os << "module rg_fa(a, b, ci, s, co);\n"
        "  input a, b, ci;\n"
        "  output s, co;\n"
        "  wire ab, ac, bc;\n"
        "  xor g0(s, a, b, ci);\n"
        "  and g1(ab, a, b);\n"
        "  and g2(ac, a, ci);\n"
        "  and g3(bc, b, ci);\n"
        "  or g4(co, ab, ac, bc);\n"
        "endmodule\n\n"
        "module rg_ha(a, b, s, co);\n"
        "  input a, b;\n"
        "  output s, co;\n"
        "  xor g0(s, a, b);\n"
        "  and g1(co, a, b);\n"
        "endmodule\n\n";

  // Port list.
  std::vector<std::string> ports;
  std::ostringstream decl;
  const std::size_t p = nl.inputs().size();
  ports.push_back("x");
  decl << "  input [" << (p ? p - 1 : 0) << ":0] x;\n";
  for (const OutputPort& port : nl.outputs()) {
    if (const auto* plain = std::get_if<PlainResidue>(&port.value)) {
      ports.push_back(port.name);
      decl << "  output [" << plain->bits.size() - 1 << ":0] " << port.name << ";\n";
    } else {
      const auto& d1 = std::get<D1Output>(port.value);
      const std::string prefix = port.name == "x" ? "" : port.name + "_";
      ports.push_back(prefix + "x_z");
      ports.push_back(prefix + "mag");
      decl << "  output " << prefix << "x_z;\n";
      decl << "  output [" << d1.magnitude.size() - 1 << ":0] " << prefix << "mag;\n";
    }
  }
  os << "module " << name << "(";
  for (std::size_t i = 0; i < ports.size(); ++i)
    os << (i ? ", " : "") << ports[i];
  os << ");\n" << decl.str();

  // Wires and inverted copies.
  std::set<WireId> inverted;
  for (const Gate& g : nl.gates())
    for (const Signal& s : g.inputs)
      if (s.inverted)
        inverted.insert(s.wire);
  for (const OutputPort& port : nl.outputs())
    for (const Signal& s : port.signals())
      if (s.inverted)
        inverted.insert(s.wire);

  auto wname = [](WireId w) { return "w" + std::to_string(w); };
  auto sname = [&](const Signal& s) { return s.inverted ? wname(s.wire) + "_n" : wname(s.wire); };

  for (std::size_t i = 0; i < p; ++i)
    os << "  wire " << wname(nl.inputs()[i]) << ";\n";
  for (const Gate& g : nl.gates()) {
    const char* decl_kw = g.kind == GateKind::Const0 ? "supply0" :
                          g.kind == GateKind::Const1 ? "supply1" : "wire";
    for (WireId w : g.outputs)
      os << "  " << decl_kw << ' ' << wname(w) << ";\n";
  }
  for (WireId w : inverted)
    os << "  wire " << wname(w) << "_n;\n";

  std::size_t inst = 0;
  for (std::size_t i = 0; i < p; ++i)
    os << "  buf u" << inst++ << '(' << wname(nl.inputs()[i]) << ", x[" << i << "]);\n";
  for (WireId w : inverted)
    os << "  not u" << inst++ << '(' << wname(w) << "_n, " << wname(w) << ");\n";

  for (const Gate& g : nl.gates()) {
    switch (g.kind) {
    case GateKind::FullAdder:
      os << "  rg_fa u" << inst++ << '(' << sname(g.inputs[0]) << ", " << sname(g.inputs[1]) << ", "
         << sname(g.inputs[2]) << ", " << wname(g.outputs[0]) << ", " << wname(g.outputs[1])
         << ");\n";
      break;
    case GateKind::HalfAdder:
      os << "  rg_ha u" << inst++ << '(' << sname(g.inputs[0]) << ", " << sname(g.inputs[1]) << ", "
         << wname(g.outputs[0]) << ", " << wname(g.outputs[1]) << ");\n";
      break;
    case GateKind::And:
    case GateKind::Or:
      os << "  " << (g.kind == GateKind::And ? "and" : "or") << " u" << inst++ << '('
         << wname(g.outputs[0]) << ", " << sname(g.inputs[0]) << ", " << sname(g.inputs[1])
         << ");\n";
      break;
    case GateKind::Not:
      os << "  not u" << inst++ << '(' << wname(g.outputs[0]) << ", " << sname(g.inputs[0])
         << ");\n";
      break;
    case GateKind::Const0:
    case GateKind::Const1:
      break;
    }
  }

  for (const OutputPort& port : nl.outputs()) {
    if (const auto* plain = std::get_if<PlainResidue>(&port.value)) {
      for (std::size_t i = 0; i < plain->bits.size(); ++i)
        os << "  buf u" << inst++ << '(' << port.name << '[' << i << "], " << sname(plain->bits[i])
           << ");\n";
    } else {
      const auto& d1 = std::get<D1Output>(port.value);
      const std::string prefix = port.name == "x" ? "" : port.name + "_";
      os << "  buf u" << inst++ << '(' << prefix << "x_z, " << sname(d1.zero_flag) << ");\n";
      for (std::size_t i = 0; i < d1.magnitude.size(); ++i)
        os << "  buf u" << inst++ << '(' << prefix << "mag[" << i << "], " << sname(d1.magnitude[i])
           << ");\n";
    }
  }
  os << "endmodule\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Reports

Json cost_to_json(const CostReport& c)
{
  return {{"fa", c.fa_count},   {"ha", c.ha_count},       {"and", c.and_count},
          {"or", c.or_count},   {"not", c.not_count},     {"const", c.const_count},
          {"depth", c.depth}};
}

Json report_to_json(const BuildReport& r)
{
  Json j;
  j["family"] = std::string(to_string(r.family));
  j["p"] = r.p;
  j["n"] = r.n;
  j["q"] = r.q;
  j["q_effective"] = r.q_effective;
  j["padded"] = r.padded;
  j["padding_bits"] = r.padding_bits;
  j["cor"] = r.cor;
  j["cor_raw"] = r.cor_raw;
  j["ledger"] = Json::array();
  for (const auto& e : r.ledger)
    j["ledger"].push_back({{"label", e.label}, {"amount", e.amount}});
  if (r.family == Family::UniversalD1 || r.family == Family::BiResidue) {
    j["front_end_correction"] = r.front_end_correction;
    j["core_constant"] = r.core_constant;
    j["residual_correction"] = r.residual_correction;
    j["front_end_fa"] = r.front_end_fa;
    j["front_end_ha"] = r.front_end_ha;
  }
  if (r.family == Family::BiResidue)
    j["shared_fa"] = r.front_end_fa;
  j["stages"] = Json::array();
  for (const auto& t : r.tables) {
    Json jt;
    jt["label"] = t.label;
    jt["width"] = t.table.width;
    jt["stages"] = Json::array();
    for (const auto& s : t.table.stages) {
      Json js;
      js["entering"] = s.entering;
      js["fa"] = Json::array();
      js["ha"] = Json::array();
      for (const auto& a : s.allocation) {
        js["fa"].push_back(a.full_adders);
        js["ha"].push_back(a.half_adders);
      }
      jt["stages"].push_back(std::move(js));
    }
    jt["final"] = t.table.final_counts;
    j["stages"].push_back(std::move(jt));
  }
  j["cost"] = cost_to_json(r.cost);
  return j;
}

Json verdict_to_json(const Verdict& v)
{
  Json j;
  j["pass"] = v.pass;
  j["evaluated"] = v.evaluated;
  j["sampler"] = v.sampler;
  if (v.counterexample)
    j["counterexample"] = *v.counterexample;
  else
    j["counterexample"] = nullptr;
  j["detail"] = v.detail;
  return j;
}

std::string report_to_text(const BuildReport& r)
{
  std::ostringstream os;
  os << "family: " << to_string(r.family) << "\n";
  os << "p = " << r.p << ", n = " << r.n << ", blocks q = " << r.q;
  if (r.padded)
    os << " (padded to " << r.q_effective << " blocks, " << r.padding_bits << " zero bits)";
  os << "\n";
  switch (r.family) {
  case Family::ClassicFermat: {
    const std::uint64_t m = Modulus::fermat(r.n).value();
    os << "corrections:";
    for (const auto& e : r.ledger)
      os << ' ' << e.label << '=' << e.amount;
    os << "\nCOR(" << r.p << ", " << m << ") = |" << r.cor_raw << "|_" << m << " = " << r.cor
       << "\n";
    break;
  }
  case Family::UniversalD1:
  case Family::BiResidue:
    os << "front-end correction: " << r.front_end_correction << "\n";
    os << "core constant: +" << r.core_constant << " (fixed, independent of p)\n";
    os << "residual correction on D1 path: " << r.residual_correction << "\n";
    os << "front-end: " << r.front_end_fa << " FA, " << r.front_end_ha << " HA\n";
    if (r.family == Family::BiResidue)
      os << "shared FAs: " << r.front_end_fa << "\n";
    break;
  case Family::ClassicMersenne:
    break;
  }
  os << "cost: " << r.cost.fa_count << " FA, " << r.cost.ha_count << " HA, " << r.cost.and_count
     << " AND, " << r.cost.or_count << " OR, " << r.cost.not_count << " NOT, depth "
     << r.cost.depth << "\n";
  return os.str();
}

} // namespace rgen
