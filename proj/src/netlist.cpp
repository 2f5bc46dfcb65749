#include "rgen/netlist.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <unordered_map>

namespace rgen {

namespace {

constexpr std::array<std::string_view, 7> kGateNames = {"FA", "HA", "AND", "OR", "NOT", "CONST0",
                                                        "CONST1"};

std::size_t kind_index(GateKind k) { return static_cast<std::size_t>(k); }

} // namespace

std::string_view to_string(GateKind kind) { return kGateNames[kind_index(kind)]; }

std::optional<GateKind> gate_kind_from_string(std::string_view s)
{
  for (std::size_t i = 0; i < kGateNames.size(); ++i)
    if (kGateNames[i] == s)
      return static_cast<GateKind>(i);
  return std::nullopt;
}

std::size_t gate_input_count(GateKind kind)
{
  switch (kind) {
  case GateKind::FullAdder:
    return 3;
  case GateKind::HalfAdder:
  case GateKind::And:
  case GateKind::Or:
    return 2;
  case GateKind::Not:
    return 1;
  case GateKind::Const0:
  case GateKind::Const1:
    return 0;
  }
  return 0;
}

std::size_t gate_output_count(GateKind kind)
{
  return kind == GateKind::FullAdder || kind == GateKind::HalfAdder ? 2 : 1;
}

std::vector<Signal> OutputPort::signals() const
{
  if (const auto* plain = std::get_if<PlainResidue>(&value))
    return plain->bits;
  const auto& d1 = std::get<D1Output>(value);
  std::vector<Signal> out = d1.magnitude;
  out.push_back(d1.zero_flag);
  return out;
}

// ---------------------------------------------------------------------------
// Netlist

Netlist Netlist::assemble(NetlistMeta meta, std::size_t wire_count, std::vector<WireId> inputs,
                          std::vector<int> input_classes, std::vector<Gate> gates,
                          std::vector<OutputPort> outputs)
{
  if (input_classes.empty())
    input_classes.assign(inputs.size(), -1);
  if (input_classes.size() != inputs.size())
    throw NetlistError("input class list does not match the input count");

  // driven[w] is set once w is produced; reads must see a driven wire.
  std::vector<char> driven(wire_count, 0);
  auto drive = [&](WireId w) {
    if (w >= wire_count)
      throw NetlistError("wire " + std::to_string(w) + " out of range");
    if (driven[w])
      throw NetlistError("wire " + std::to_string(w) + " driven more than once");
    driven[w] = 1;
  };
  auto read = [&](const Signal& s, const std::string& where) {
    if (s.wire >= wire_count || !driven[s.wire])
      throw NetlistError(where + " reads undriven wire " + std::to_string(s.wire));
  };

  for (WireId w : inputs)
    drive(w);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const Gate& gate = gates[g];
    if (gate.inputs.size() != gate_input_count(gate.kind) ||
        gate.outputs.size() != gate_output_count(gate.kind))
      throw NetlistError("gate " + std::to_string(g) + " has wrong arity for " +
                         std::string(to_string(gate.kind)));
    for (const Signal& s : gate.inputs)
      read(s, "gate " + std::to_string(g));
    for (WireId w : gate.outputs)
      drive(w);
  }
  std::set<std::string> names;
  for (const OutputPort& port : outputs) {
    if (!names.insert(port.name).second)
      throw NetlistError("duplicate output port '" + port.name + "'");
    for (const Signal& s : port.signals())
      read(s, "output '" + port.name + "'");
  }

  Netlist nl;
  nl.meta_ = std::move(meta);
  nl.wire_count_ = wire_count;
  nl.inputs_ = std::move(inputs);
  nl.input_classes_ = std::move(input_classes);
  nl.gates_ = std::move(gates);
  nl.outputs_ = std::move(outputs);
  return nl;
}

const OutputPort& Netlist::output(std::string_view name) const
{
  return outputs_[output_index(name)];
}

std::size_t Netlist::output_index(std::string_view name) const
{
  for (std::size_t i = 0; i < outputs_.size(); ++i)
    if (outputs_[i].name == name)
      return i;
  throw NetlistError("no output port named '" + std::string(name) + "'");
}

Netlist Netlist::with_meta(NetlistMeta meta) const
{
  Netlist copy = *this;
  copy.meta_ = std::move(meta);
  return copy;
}

Netlist Netlist::with_gate_input(std::size_t gate, std::size_t slot, Signal replacement) const
{
  if (gate >= gates_.size() || slot >= gates_[gate].inputs.size())
    throw NetlistError("with_gate_input: gate/slot out of range");
  auto gates = gates_;
  gates[gate].inputs[slot] = replacement;
  return assemble(meta_, wire_count_, inputs_, input_classes_, std::move(gates), outputs_);
}

// ---------------------------------------------------------------------------
// NetlistBuilder

void NetlistBuilder::check(Signal s) const
{
  if (s.wire >= wire_count_)
    throw NetlistError("builder: signal refers to unknown wire " + std::to_string(s.wire));
}

Signal NetlistBuilder::add_input(int weight_class)
{
  WireId w = fresh();
  inputs_.push_back(w);
  input_classes_.push_back(weight_class);
  return {w, false, weight_class};
}

Signal NetlistBuilder::const0()
{
  if (!const0_) {
    WireId w = fresh();
    gates_.push_back({GateKind::Const0, {}, {w}});
    const0_ = Signal{w, false, -1};
  }
  return *const0_;
}

Signal NetlistBuilder::const1()
{
  if (!const1_) {
    WireId w = fresh();
    gates_.push_back({GateKind::Const1, {}, {w}});
    const1_ = Signal{w, false, -1};
  }
  return *const1_;
}

AdderOut NetlistBuilder::full_adder(Signal a, Signal b, Signal c)
{
  check(a), check(b), check(c);
  WireId s = fresh(), co = fresh();
  gates_.push_back({GateKind::FullAdder, {a, b, c}, {s, co}});
  return {{s, false, -1}, {co, false, -1}};
}

AdderOut NetlistBuilder::half_adder(Signal a, Signal b)
{
  check(a), check(b);
  WireId s = fresh(), co = fresh();
  gates_.push_back({GateKind::HalfAdder, {a, b}, {s, co}});
  return {{s, false, -1}, {co, false, -1}};
}

Signal NetlistBuilder::and_gate(Signal a, Signal b)
{
  check(a), check(b);
  WireId y = fresh();
  gates_.push_back({GateKind::And, {a, b}, {y}});
  return {y, false, -1};
}

Signal NetlistBuilder::or_gate(Signal a, Signal b)
{
  check(a), check(b);
  WireId y = fresh();
  gates_.push_back({GateKind::Or, {a, b}, {y}});
  return {y, false, -1};
}

Signal NetlistBuilder::not_gate(Signal a)
{
  check(a);
  WireId y = fresh();
  gates_.push_back({GateKind::Not, {a}, {y}});
  return {y, false, -1};
}

Netlist NetlistBuilder::build(NetlistMeta meta) const
{
  return Netlist::assemble(std::move(meta), wire_count_, inputs_, input_classes_, gates_,
                           outputs_);
}

// ---------------------------------------------------------------------------
// Simulation

PackedSimulator::PackedSimulator(const Netlist& nl) : nl_(&nl), values_(nl.wire_count(), 0) {}

void PackedSimulator::run(std::span<const std::uint64_t> input_lanes)
{
  const auto inputs = nl_->inputs();
  if (input_lanes.size() != inputs.size())
    throw NetlistError("input width mismatch: netlist has " + std::to_string(inputs.size()) +
                       " inputs, got " + std::to_string(input_lanes.size()));
  for (std::size_t i = 0; i < inputs.size(); ++i)
    values_[inputs[i]] = input_lanes[i];

  for (const Gate& g : nl_->gates()) {
    switch (g.kind) {
    case GateKind::FullAdder: {
      const std::uint64_t a = read(g.inputs[0]), b = read(g.inputs[1]), c = read(g.inputs[2]);
      values_[g.outputs[0]] = a ^ b ^ c;
      values_[g.outputs[1]] = (a & b) | (a & c) | (b & c);
      break;
    }
    case GateKind::HalfAdder: {
      const std::uint64_t a = read(g.inputs[0]), b = read(g.inputs[1]);
      values_[g.outputs[0]] = a ^ b;
      values_[g.outputs[1]] = a & b;
      break;
    }
    case GateKind::And:
      values_[g.outputs[0]] = read(g.inputs[0]) & read(g.inputs[1]);
      break;
    case GateKind::Or:
      values_[g.outputs[0]] = read(g.inputs[0]) | read(g.inputs[1]);
      break;
    case GateKind::Not:
      values_[g.outputs[0]] = ~read(g.inputs[0]);
      break;
    case GateKind::Const0:
      values_[g.outputs[0]] = 0;
      break;
    case GateKind::Const1:
      values_[g.outputs[0]] = ~std::uint64_t{0};
      break;
    }
  }
}

std::uint64_t PackedSimulator::plain_value(std::size_t port, unsigned lane) const
{
  const auto& plain = std::get<PlainResidue>(nl_->outputs()[port].value);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < plain.bits.size(); ++i) {
    const Signal& s = plain.bits[i];
    const unsigned weight = s.weight_class >= 0 ? static_cast<unsigned>(s.weight_class)
                                                : static_cast<unsigned>(i);
    v += ((read(s) >> lane) & 1) << weight;
  }
  return v;
}

D1Value PackedSimulator::d1_value(std::size_t port, unsigned lane) const
{
  const auto& d1 = std::get<D1Output>(nl_->outputs()[port].value);
  D1Value v;
  v.zero_flag = (read(d1.zero_flag) >> lane) & 1;
  v.magnitude = 0;
  for (std::size_t i = 0; i < d1.magnitude.size(); ++i)
    v.magnitude |= ((read(d1.magnitude[i]) >> lane) & 1) << i;
  return v;
}

PortValue PackedSimulator::port_value(std::size_t port, unsigned lane) const
{
  const OutputPort& op = nl_->outputs()[port];
  PortValue pv;
  pv.name = op.name;
  if (const auto* plain = std::get_if<PlainResidue>(&op.value)) {
    for (const Signal& s : plain->bits)
      pv.bits.push_back(static_cast<std::uint8_t>((read(s) >> lane) & 1));
    pv.value = plain_value(port, lane);
  } else {
    const auto& d1 = std::get<D1Output>(op.value);
    for (const Signal& s : d1.magnitude)
      pv.bits.push_back(static_cast<std::uint8_t>((read(s) >> lane) & 1));
    D1Value v = d1_value(port, lane);
    pv.d1 = v;
    // Raw (x_z, magnitude) pair as an (n+1)-bit number; a non-canonical pair
    // shows up here rather than throwing.
    pv.value = v.zero_flag && v.magnitude == 0 ? 0 : (v.zero_flag ? 0 : 1) + v.magnitude;
  }
  return pv;
}

std::vector<std::uint64_t> pack_inputs(std::span<const std::uint64_t> xs, unsigned p)
{
  if (xs.size() > 64)
    throw NetlistError("pack_inputs: at most 64 lanes");
  std::vector<std::uint64_t> lanes(p, 0);
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (unsigned i = 0; i < p && i < 64; ++i)
      lanes[i] |= ((xs[j] >> i) & 1) << j;
  return lanes;
}

std::vector<PortValue> evaluate(const Netlist& nl, std::span<const std::uint8_t> input_bits)
{
  std::vector<std::uint64_t> lanes(input_bits.size());
  for (std::size_t i = 0; i < input_bits.size(); ++i)
    lanes[i] = input_bits[i] & 1;
  PackedSimulator sim(nl);
  sim.run(lanes);
  std::vector<PortValue> out;
  for (std::size_t k = 0; k < nl.outputs().size(); ++k)
    out.push_back(sim.port_value(k, 0));
  return out;
}

std::vector<PortValue> evaluate(const Netlist& nl, std::uint64_t x)
{
  std::vector<std::uint8_t> bits(nl.inputs().size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    bits[i] = i < 64 ? static_cast<std::uint8_t>((x >> i) & 1) : 0;
  return evaluate(nl, bits);
}

// ---------------------------------------------------------------------------
// Cost

CostReport cost(const Netlist& nl)
{
  CostReport r;
  std::vector<std::size_t> level(nl.wire_count(), 0);
  std::set<WireId> inverted_reads;

  for (const Gate& g : nl.gates()) {
    std::size_t in_level = 0;
    for (const Signal& s : g.inputs) {
      in_level = std::max(in_level, level[s.wire]);
      if (s.inverted)
        inverted_reads.insert(s.wire);
    }
    std::size_t out_level = in_level + 1;
    switch (g.kind) {
    case GateKind::FullAdder:
      ++r.fa_count;
      break;
    case GateKind::HalfAdder:
      ++r.ha_count;
      break;
    case GateKind::And:
      ++r.and_count;
      break;
    case GateKind::Or:
      ++r.or_count;
      break;
    case GateKind::Not:
      ++r.not_count;
      out_level = in_level;
      break;
    case GateKind::Const0:
    case GateKind::Const1:
      ++r.const_count;
      out_level = 0;
      break;
    }
    for (WireId w : g.outputs)
      level[w] = out_level;
  }
  for (const OutputPort& port : nl.outputs())
    for (const Signal& s : port.signals()) {
      r.depth = std::max(r.depth, level[s.wire]);
      if (s.inverted)
        inverted_reads.insert(s.wire);
    }
  r.not_count += inverted_reads.size();
  return r;
}

// ---------------------------------------------------------------------------
// Composition

namespace {

Signal lookup(const Netlist& front, const OutputRef& ref)
{
  const OutputPort& port = front.output(ref.port);
  if (const auto* plain = std::get_if<PlainResidue>(&port.value)) {
    if (ref.bit >= plain->bits.size())
      throw NetlistError("wiring refers to bit " + std::to_string(ref.bit) + " of port '" +
                         ref.port + "' which has only " + std::to_string(plain->bits.size()));
    return plain->bits[ref.bit];
  }
  const auto& d1 = std::get<D1Output>(port.value);
  if (ref.bit == d1.magnitude.size())
    return d1.zero_flag;
  if (ref.bit > d1.magnitude.size())
    throw NetlistError("wiring refers to a bit beyond D1 port '" + ref.port + "'");
  return d1.magnitude[ref.bit];
}

} // namespace

Netlist compose(const Netlist& front, std::span<const BackEnd> backs, NetlistMeta meta)
{
  std::size_t wire_count = front.wire_count();
  std::vector<Gate> gates(front.gates().begin(), front.gates().end());
  std::vector<OutputPort> outputs;

  for (const BackEnd& be : backs) {
    const Netlist& back = be.netlist.get();
    const auto back_inputs = back.inputs();
    if (be.wiring.size() != back_inputs.size())
      throw NetlistError("compose: back netlist has " + std::to_string(back_inputs.size()) +
                         " inputs but wiring connects " + std::to_string(be.wiring.size()) +
                         " (dangling input)");

    // Back wire -> signal in the composed netlist.
    std::vector<std::optional<Signal>> map(back.wire_count());
    for (std::size_t i = 0; i < back_inputs.size(); ++i) {
      Signal src = lookup(front, be.wiring[i]);
      const int want = back.input_classes()[i];
      if (want >= 0 && src.weight_class != want)
        throw NetlistError("compose: weight class mismatch at back input " + std::to_string(i) +
                           " (expects " + std::to_string(want) + ", got " +
                           std::to_string(src.weight_class) + ")");
      map[back_inputs[i]] = src;
    }
    const std::size_t base = wire_count;
    auto remap = [&](const Signal& s) {
      if (map[s.wire]) {
        Signal m = *map[s.wire];
        m.inverted ^= s.inverted;
        m.weight_class = s.weight_class;
        return m;
      }
      return Signal{static_cast<WireId>(base + s.wire), s.inverted, s.weight_class};
    };

    std::size_t internal = 0;
    for (const Gate& g : back.gates()) {
      Gate ng{g.kind, {}, {}};
      for (const Signal& s : g.inputs)
        ng.inputs.push_back(remap(s));
      for (WireId w : g.outputs) {
        ng.outputs.push_back(static_cast<WireId>(base + w));
        internal = std::max<std::size_t>(internal, w + 1);
      }
      gates.push_back(std::move(ng));
    }
    wire_count = base + std::max(internal, back.wire_count());

    for (const OutputPort& port : back.outputs()) {
      OutputPort np{port.name, port.value};
      if (auto* plain = std::get_if<PlainResidue>(&np.value)) {
        for (Signal& s : plain->bits)
          s = remap(s);
      } else {
        auto& d1 = std::get<D1Output>(np.value);
        d1.zero_flag = remap(d1.zero_flag);
        for (Signal& s : d1.magnitude)
          s = remap(s);
      }
      outputs.push_back(std::move(np));
    }
  }

  return Netlist::assemble(std::move(meta), wire_count,
                           {front.inputs().begin(), front.inputs().end()},
                           {front.input_classes().begin(), front.input_classes().end()},
                           std::move(gates), std::move(outputs));
}

Netlist compose(const Netlist& front, const Netlist& back, const Wiring& wiring, NetlistMeta meta)
{
  const BackEnd be{std::cref(back), wiring};
  return compose(front, std::span<const BackEnd>(&be, 1), std::move(meta));
}

Netlist identity_netlist(unsigned width, std::string port)
{
  NetlistBuilder b;
  PlainResidue out;
  for (unsigned i = 0; i < width; ++i)
    out.bits.push_back(b.add_input(static_cast<int>(i)));
  b.add_output({std::move(port), std::move(out)});
  return b.build({"identity", width, 0, 0});
}

} // namespace rgen
