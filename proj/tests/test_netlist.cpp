#include "rgen/generators.hpp"
#include "rgen/netlist.hpp"

#include <doctest.h>

#include <bit>

using namespace rgen;

namespace {

Netlist single_fa()
{
  NetlistBuilder b;
  Signal a = b.add_input(), c = b.add_input(), d = b.add_input();
  AdderOut o = b.full_adder(a, c, d);
  b.add_output({"s", PlainResidue{{o.sum.at_class(0)}, 0}});
  b.add_output({"c", PlainResidue{{o.carry.at_class(0)}, 0}});
  return b.build({"fa", 3, 0, 0});
}

} // namespace

TEST_CASE("full adder truth table")
{
  const Netlist nl = single_fa();
  for (std::uint64_t x = 0; x < 8; ++x) {
    const auto out = evaluate(nl, x);
    const unsigned ones = std::popcount(x);
    CHECK(out[0].value == (ones & 1));
    CHECK(out[1].value == (ones >= 2));
  }
  const std::uint8_t in[] = {1, 1, 0};
  const auto out = evaluate(nl, in);
  CHECK(out[0].value == 0);
  CHECK(out[1].value == 1);
}

TEST_CASE("inversion flags and logic gates")
{
  NetlistBuilder b;
  Signal a = b.add_input(), c = b.add_input();
  Signal y_and = b.and_gate(~a, c);
  Signal y_or = b.or_gate(a, ~c);
  Signal y_not = b.not_gate(a);
  AdderOut h = b.half_adder(a, c);
  b.add_output({"o", PlainResidue{{y_and.at_class(0), y_or.at_class(1), y_not.at_class(2),
                                   h.sum.at_class(3), h.carry.at_class(4), (~b.const0()).at_class(5),
                                   b.const1().at_class(6)},
                                  0}});
  const Netlist nl = b.build({});
  for (unsigned x = 0; x < 4; ++x) {
    const unsigned av = x & 1, cv = x >> 1;
    const auto bits = evaluate(nl, x)[0].bits;
    CHECK(bits[0] == (!av && cv));
    CHECK(bits[1] == (av || !cv));
    CHECK(bits[2] == !av);
    CHECK(bits[3] == (av ^ cv));
    CHECK(bits[4] == (av && cv));
    CHECK(bits[5] == 1);
    CHECK(bits[6] == 1);
  }
  const CostReport rep = cost(nl);
  CHECK(rep.and_count == 1);
  CHECK(rep.or_count == 1);
  CHECK(rep.ha_count == 1);
  // one explicit NOT plus inverted reads of a, c and const0
  CHECK(rep.not_count == 4);
  CHECK(rep.depth == 1);
}

TEST_CASE("input width mismatch is rejected")
{
  const Netlist nl = single_fa();
  const std::uint8_t two[] = {1, 0};
  CHECK_THROWS_AS(evaluate(nl, two), NetlistError);
}

TEST_CASE("assemble rejects malformed netlists")
{
  // gate reading a wire produced later
  std::vector<Gate> gates = {{GateKind::HalfAdder, {{0}, {3}}, {1, 2}},
                             {GateKind::Const0, {}, {3}}};
  CHECK_THROWS_AS(Netlist::assemble({}, 4, {0}, {}, gates, {}), NetlistError);

  // wire driven twice
  gates = {{GateKind::HalfAdder, {{0}, {0}}, {0, 1}}};
  CHECK_THROWS_AS(Netlist::assemble({}, 2, {0}, {}, gates, {}), NetlistError);

  // output reading an undriven wire
  std::vector<OutputPort> outs = {{"o", PlainResidue{{{5}}, 0}}};
  CHECK_THROWS_AS(Netlist::assemble({}, 6, {0}, {}, {}, outs), NetlistError);

  // arity
  gates = {{GateKind::FullAdder, {{0}, {0}}, {1, 2}}};
  CHECK_THROWS_AS(Netlist::assemble({}, 3, {0}, {}, gates, {}), NetlistError);
}

TEST_CASE("cost of an empty pass-through netlist")
{
  const CostReport c = cost(identity_netlist(5));
  CHECK(c == CostReport{});
}

TEST_CASE("compose with an identity front is the back netlist")
{
  const Netlist back = build_universal_d1(16, 2).netlist;
  const Netlist front = identity_netlist(16);
  Wiring w;
  for (std::size_t i = 0; i < 16; ++i)
    w.push_back({"y", i});
  const Netlist nl = compose(front, back, w, back.meta());
  CHECK(cost(nl) == cost(back));
  for (std::uint64_t x = 0; x < (1u << 16); x += 97)
    REQUIRE(evaluate(nl, x)[0].d1 == evaluate(back, x)[0].d1);
}

TEST_CASE("compose errors")
{
  const D1Core core = build_d1_core(2);
  const Netlist front = build_front_end(16, 2).netlist;
  Wiring w;
  for (unsigned i = 0; i < 4; ++i)
    w.push_back({"dc", i});
  for (unsigned i = 0; i < 4; ++i)
    w.push_back({"ds", i});

  SUBCASE("dangling input")
  {
    Wiring short_w(w.begin(), w.end() - 1);
    CHECK_THROWS_AS(compose(front, core.netlist, short_w, {}), NetlistError);
  }
  SUBCASE("weight class mismatch")
  {
    std::swap(w[0], w[1]);
    CHECK_THROWS_AS(compose(front, core.netlist, w, {}), NetlistError);
  }
  SUBCASE("unknown port")
  {
    w[0].port = "nope";
    CHECK_THROWS_AS(compose(front, core.netlist, w, {}), NetlistError);
  }
  SUBCASE("well-formed")
  {
    CHECK_NOTHROW(compose(front, core.netlist, w, {}));
  }
}

TEST_CASE("cost is additive under compose")
{
  for (auto [p, n] : {std::pair{16u, 2u}, {24u, 3u}, {40u, 4u}, {19u, 3u}}) {
    const FrontEnd fe = build_front_end(p, n);
    const D1Core core = build_d1_core(n);
    const Netlist whole = build_universal_d1(p, n).netlist;
    const CostReport a = cost(fe.netlist), b = cost(core.netlist), c = cost(whole);
    CHECK(c.fa_count == a.fa_count + b.fa_count);
    CHECK(c.ha_count == a.ha_count + b.ha_count);
    CHECK(c.and_count == a.and_count + b.and_count);
    CHECK(c.or_count == a.or_count + b.or_count);
  }
}

TEST_CASE("evaluation is deterministic and packed lanes agree with scalar runs")
{
  const Netlist nl = build_bi_residue(24, 3).netlist;
  std::vector<std::uint64_t> xs;
  for (std::uint64_t i = 0; i < 64; ++i)
    xs.push_back(i * 0x9e3779b97f4a7c15ULL >> 40);
  PackedSimulator sim(nl);
  sim.run(pack_inputs(xs, 24));
  for (unsigned lane = 0; lane < 64; ++lane) {
    const auto a = evaluate(nl, xs[lane]);
    const auto b = evaluate(nl, xs[lane]);
    for (std::size_t port = 0; port < a.size(); ++port) {
      REQUIRE(a[port].bits == b[port].bits);
      REQUIRE(a[port].bits == sim.port_value(port, lane).bits);
    }
  }
}

TEST_CASE("with_gate_input produces a modified copy")
{
  const Netlist nl = single_fa();
  const Netlist bad = nl.with_gate_input(0, 0, nl.gates()[0].inputs[1]);
  CHECK(evaluate(nl, 1)[0].value == 1);
  CHECK(evaluate(bad, 1)[0].value == 0);
  CHECK_THROWS_AS(nl.with_gate_input(5, 0, {}), NetlistError);
}

TEST_CASE("depth counts adders as one level")
{
  // Ripple of three FAs: depth 3.
  NetlistBuilder b;
  Signal c = b.add_input();
  for (int i = 0; i < 3; ++i)
    c = b.full_adder(c, b.add_input(), b.add_input()).carry;
  b.add_output({"c", PlainResidue{{c.at_class(0)}, 0}});
  CHECK(cost(b.build({})).depth == 3);
}
