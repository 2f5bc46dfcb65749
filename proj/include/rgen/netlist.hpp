#pragma once

// Gate-level circuit representation shared by every builder and verifier.
//
// Wires are numbered in creation order and a gate may only read wires that
// already exist, so the gate list is topologically ordered by construction.
// Logical inversion is a flag on the reading Signal rather than a gate.

#include "rgen/modmath.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rgen {

using WireId = std::uint32_t;

class NetlistError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Signal {
  WireId wire = 0;
  bool inverted = false;
  /// Residue weight class k (weight |2^k| in the surrounding modulus);
  /// -1 when the signal carries no class.
  int weight_class = -1;

  Signal operator~() const { return {wire, !inverted, weight_class}; }
  Signal at_class(int k) const { return {wire, inverted, k}; }

  friend bool operator==(const Signal&, const Signal&) = default;
};

enum class GateKind { FullAdder, HalfAdder, And, Or, Not, Const0, Const1 };

std::string_view to_string(GateKind kind);
std::optional<GateKind> gate_kind_from_string(std::string_view s);
std::size_t gate_input_count(GateKind kind);
std::size_t gate_output_count(GateKind kind);

struct Gate {
  GateKind kind;
  std::vector<Signal> inputs;
  /// FA/HA: {sum, carry}; everything else: {out}.
  std::vector<WireId> outputs;
};

/// Plain output: value = sum of bit * 2^weight_class, plus `correction`
/// owed downstream (0 for finished generators).
struct PlainResidue {
  std::vector<Signal> bits;
  std::uint64_t correction = 0;
};

struct D1Output {
  Signal zero_flag;
  std::vector<Signal> magnitude;
};

struct OutputPort {
  std::string name;
  std::variant<PlainResidue, D1Output> value;

  bool is_d1() const { return std::holds_alternative<D1Output>(value); }
  std::vector<Signal> signals() const;
};

struct NetlistMeta {
  std::string family;
  unsigned p = 0;
  unsigned n = 0;
  std::uint64_t cor = 0;
};

struct CostReport {
  std::size_t fa_count = 0;
  std::size_t ha_count = 0;
  std::size_t and_count = 0;
  std::size_t or_count = 0;
  std::size_t not_count = 0;
  std::size_t const_count = 0;
  std::size_t depth = 0;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

class Netlist {
public:
  Netlist() = default;

  /// Validates and assembles a netlist. Throws NetlistError when a gate reads
  /// an undriven or later wire, a wire is driven twice, or an output is
  /// undriven.
  static Netlist assemble(NetlistMeta meta, std::size_t wire_count, std::vector<WireId> inputs,
                          std::vector<int> input_classes, std::vector<Gate> gates,
                          std::vector<OutputPort> outputs);

  const NetlistMeta& meta() const { return meta_; }
  std::size_t wire_count() const { return wire_count_; }
  std::span<const WireId> inputs() const { return inputs_; }
  std::span<const int> input_classes() const { return input_classes_; }
  std::span<const Gate> gates() const { return gates_; }
  std::span<const OutputPort> outputs() const { return outputs_; }
  const OutputPort& output(std::string_view name) const;
  std::size_t output_index(std::string_view name) const;

  Netlist with_meta(NetlistMeta meta) const;
  /// Copy with one gate input replaced; used for fault injection.
  Netlist with_gate_input(std::size_t gate, std::size_t slot, Signal replacement) const;

private:
  NetlistMeta meta_;
  std::size_t wire_count_ = 0;
  std::vector<WireId> inputs_;
  std::vector<int> input_classes_;
  std::vector<Gate> gates_;
  std::vector<OutputPort> outputs_;
};

struct AdderOut {
  Signal sum;
  Signal carry;
};

class NetlistBuilder {
public:
  Signal add_input(int weight_class = -1);
  Signal const0();
  Signal const1();
  AdderOut full_adder(Signal a, Signal b, Signal c);
  AdderOut half_adder(Signal a, Signal b);
  Signal and_gate(Signal a, Signal b);
  Signal or_gate(Signal a, Signal b);
  Signal not_gate(Signal a);

  void add_output(OutputPort port) { outputs_.push_back(std::move(port)); }

  std::size_t input_count() const { return inputs_.size(); }
  std::span<const Gate> gates() const { return gates_; }

  Netlist build(NetlistMeta meta) const;

private:
  WireId fresh() { return wire_count_++; }
  void check(Signal s) const;

  WireId wire_count_ = 0;
  std::vector<WireId> inputs_;
  std::vector<int> input_classes_;
  std::vector<Gate> gates_;
  std::vector<OutputPort> outputs_;
  std::optional<Signal> const0_;
  std::optional<Signal> const1_;
};

struct PortValue {
  std::string name;
  /// Plain: the output bits in port order. D1: the magnitude bits.
  std::vector<std::uint8_t> bits;
  /// Plain: sum of bit * 2^class. D1: the decoded residue.
  std::uint64_t value = 0;
  std::optional<D1Value> d1;
};

/// Evaluates 64 input vectors at once: lane j of every word is one vector.
class PackedSimulator {
public:
  explicit PackedSimulator(const Netlist& nl);

  /// input_lanes[i] holds primary input i for all 64 lanes.
  void run(std::span<const std::uint64_t> input_lanes);

  std::uint64_t read(Signal s) const
  {
    return values_[s.wire] ^ (s.inverted ? ~std::uint64_t{0} : 0);
  }
  PortValue port_value(std::size_t port, unsigned lane) const;
  /// Fast path for sweeps: plain weighted value or D1 (zero, magnitude).
  std::uint64_t plain_value(std::size_t port, unsigned lane) const;
  D1Value d1_value(std::size_t port, unsigned lane) const;

private:
  const Netlist* nl_;
  std::vector<std::uint64_t> values_;
};

/// Pack up to 64 consecutive integer inputs x0, x0+1, ... into input lanes.
std::vector<std::uint64_t> pack_inputs(std::span<const std::uint64_t> xs, unsigned p);

std::vector<PortValue> evaluate(const Netlist& nl, std::span<const std::uint8_t> input_bits);
std::vector<PortValue> evaluate(const Netlist& nl, std::uint64_t x);

CostReport cost(const Netlist& nl);

/// Identifies one output bit of the front netlist: plain port bit index, or
/// for a D1 port the magnitude index with index == n meaning the zero flag.
struct OutputRef {
  std::string port;
  std::size_t bit = 0;
};
using Wiring = std::vector<OutputRef>;

struct BackEnd {
  std::reference_wrapper<const Netlist> netlist;
  Wiring wiring;
};

/// Feeds the outputs of `front` into the inputs of one or more back netlists.
/// The result keeps the front's primary inputs and exposes the outputs of the
/// back netlists in order.
Netlist compose(const Netlist& front, std::span<const BackEnd> backs, NetlistMeta meta);
Netlist compose(const Netlist& front, const Netlist& back, const Wiring& wiring,
                NetlistMeta meta);

/// Pass-through netlist with `width` inputs exposed as a single plain port.
Netlist identity_netlist(unsigned width, std::string port = "y");

} // namespace rgen
