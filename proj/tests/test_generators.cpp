#include "rgen/generators.hpp"
#include "rgen/verify.hpp"

#include <doctest.h>

using namespace rgen;

namespace {

Verdict exhaustive(Family f, unsigned p, unsigned n)
{
  SweepPlan plan;
  plan.mode = SweepMode::Exhaustive;
  plan.spec = {p, n, f};
  return run_sweep(plan);
}

std::uint64_t concat(std::initializer_list<std::uint64_t> fields, unsigned n)
{
  std::uint64_t x = 0;
  unsigned shift = 0;
  for (std::uint64_t f : fields) {
    x |= f << shift;
    shift += n;
  }
  return x;
}

} // namespace

TEST_CASE("family names round-trip")
{
  for (Family f : {Family::ClassicMersenne, Family::ClassicFermat, Family::UniversalD1,
                   Family::BiResidue})
    CHECK(family_from_string(to_string(f)) == f);
  CHECK_FALSE(family_from_string("universal").has_value());
}

TEST_CASE("parameter validation")
{
  CHECK_THROWS_AS(validate({16, 1, Family::UniversalD1}), ParameterError);
  CHECK_THROWS_AS(validate({16, 25, Family::UniversalD1}), ParameterError);
  CHECK_THROWS_AS(validate({0, 3, Family::ClassicMersenne}), ParameterError);
  CHECK_THROWS_AS(validate({4097, 3, Family::ClassicMersenne}), ParameterError);
  CHECK_NOTHROW(validate({4096, 24, Family::ClassicFermat}));
  CHECK_THROWS_AS(compare_sharing(8, 3), ParameterError);
}

TEST_CASE("csa_stage_ferm examples")
{
  const Netlist nl = csa_stage_ferm_netlist(3);
  auto run = [&](std::uint64_t x, std::uint64_t y, std::uint64_t z) {
    const auto out = evaluate(nl, concat({x, y, z}, 3));
    return std::pair{out[nl.output_index("c")].value, out[nl.output_index("s")].value};
  };
  // carries 111 rotate to 110 with the top one inverted into bit 0
  CHECK(run(7, 7, 7) == std::pair<std::uint64_t, std::uint64_t>{6, 7});
  CHECK((6 + 7 - 1) % 9 == 21 % 9);
  CHECK(run(0, 0, 0) == std::pair<std::uint64_t, std::uint64_t>{1, 0});
  CHECK(cost(nl).fa_count == 3);
}

TEST_CASE("final D1 adder examples")
{
  const Netlist nl = final_adder_ferm_d1_netlist(3);
  auto run = [&](std::uint64_t a, std::uint64_t b) {
    return *evaluate(nl, concat({a, b}, 3))[0].d1;
  };
  CHECK(run(0, 0) == D1Value{false, 1});
  CHECK(run(3, 4) == D1Value{true, 0});
  CHECK(final_adder_ferm_d1_reference(3, 4, 3) == D1Value{true, 0});
  CHECK(final_adder_ferm_d1_reference(7, 7, 3) == d1_encode(16 % 9, 3));
  const CostReport c = cost(nl);
  CHECK(c.fa_count == 2);
  CHECK(c.ha_count == 4);
}

TEST_CASE("block contracts hold exhaustively")
{
  for (unsigned n = 2; n <= 5; ++n)
    CHECK_MESSAGE(check_property1(n).pass, "n=" << n);
  for (unsigned n = 2; n <= 8; ++n)
    CHECK_MESSAGE(check_property2(n).pass, "n=" << n);
  CHECK_THROWS_AS(check_property1(7), ParameterError);
  CHECK_THROWS_AS(check_property2(11), ParameterError);
}

TEST_CASE("classic generators match the oracle")
{
  CHECK(exhaustive(Family::ClassicMersenne, 12, 3).pass);
  CHECK(exhaustive(Family::ClassicMersenne, 7, 3).pass);
  CHECK(exhaustive(Family::ClassicMersenne, 2, 3).pass);
  CHECK(exhaustive(Family::ClassicFermat, 16, 3).pass);
  CHECK(exhaustive(Family::ClassicFermat, 13, 4).pass);
  CHECK(exhaustive(Family::ClassicFermat, 3, 3).pass);

  const Generated m = build_classic_mersenne(16, 3);
  CHECK(evaluate(m.netlist, 0xBEEF)[0].value == 5);
  // 2^n - 1 itself canonicalizes to 0
  CHECK(evaluate(m.netlist, 7)[0].value == 0);
}

TEST_CASE("classic 2^n+1 correction constants")
{
  for (auto [p, cor, raw] : {std::tuple{16u, 8u, -19}, {17u, 6u, -21}, {18u, 2u, -25}}) {
    const Generated g = build_classic_fermat(p, 3);
    CHECK(g.report.cor == cor);
    CHECK(g.report.cor_raw == raw);
    CHECK(g.netlist.meta().cor == cor);
    REQUIRE(g.report.tables.size() == 1);
    CHECK(g.report.tables[0].table.stages.size() == 3);
  }
  const Generated g = build_classic_fermat(16, 3);
  CHECK(g.report.padded);
  CHECK(g.report.padding_bits == 2);
  CHECK(g.report.q == 6);
}

TEST_CASE("universal D1 generator")
{
  SUBCASE("p = 4n needs no front-end adders")
  {
    const Generated g = build_universal_d1(12, 3);
    CHECK(g.report.front_end_fa == 0);
    CHECK(g.report.front_end_ha == 0);
    CHECK(evaluate(g.netlist, 0)[0].d1 == D1Value{true, 0});
    CHECK(evaluate(g.netlist, 1)[0].d1 == D1Value{false, 0});
    CHECK(exhaustive(Family::UniversalD1, 12, 3).pass);
  }
  SUBCASE("exhaustive small cases")
  {
    for (unsigned p = 8; p <= 16; ++p)
      CHECK_MESSAGE(exhaustive(Family::UniversalD1, p, 2).pass, "p=" << p);
    CHECK(exhaustive(Family::UniversalD1, 19, 3).pass);
  }
  SUBCASE("0xBEEF is a multiple of 9")
  {
    const Generated g = build_universal_d1(16, 3);
    const PortValue out = evaluate(g.netlist, 0xBEEF)[0];
    CHECK(out.d1 == D1Value{true, 0});
    CHECK(out.value == 0);
  }
  SUBCASE("padding")
  {
    const Generated g = build_universal_d1(19, 3);
    CHECK(g.report.padded);
    CHECK(g.report.q == 4);
    CHECK(g.report.padding_bits == 5);
  }
  SUBCASE("front-end FA count is p - 4n for whole blocks")
  {
    for (unsigned n = 2; n <= 5; ++n)
      for (unsigned q = 2; q <= 6; ++q) {
        const Generated g = build_universal_d1(q * 2 * n, n);
        CHECK(g.report.front_end_fa == q * 2 * n - 4 * n);
        CHECK(g.report.front_end_ha == 0);
      }
  }
}

TEST_CASE("D1 path carries no residual correction")
{
  for (unsigned n = 2; n <= 6; ++n)
    for (unsigned p = 4 * n; p <= 16 * n; p += 3) {
      const Generated g = build_universal_d1(p, n);
      CHECK(g.report.residual_correction == 0);
      CHECK(g.report.front_end_correction == 0);
      CHECK(g.report.core_constant == 2);
    }
  for (unsigned p = 4; p <= 40; ++p) {
    const FrontEnd fe = build_front_end(std::max(p, 8u), 2);
    CHECK(fe.ledger.accumulated() == 0);
    for (const Gate& gate : fe.netlist.gates())
      for (const Signal& s : gate.inputs)
        CHECK_FALSE(s.inverted);
  }
}

TEST_CASE("D1 core ledger settles to zero")
{
  for (unsigned n = 2; n <= 8; ++n) {
    const D1Core core = build_d1_core(n);
    CHECK(core.ledger.accumulated() == 0);
    CHECK(core.ledger.entries().size() == 5);
  }
}

TEST_CASE("bi-residue generator shares its front-end")
{
  const Generated g = build_bi_residue(32, 3);
  REQUIRE(g.netlist.outputs().size() == 2);
  CHECK(g.netlist.outputs()[0].name == "r");
  CHECK(g.netlist.outputs()[1].name == "x");
  const auto out = evaluate(g.netlist, 0xBEEF);
  CHECK(out[0].value == 0xBEEF % 7);
  CHECK(out[1].value == 0xBEEF % 9);
  CHECK(exhaustive(Family::BiResidue, 16, 2).pass);

  const SharingComparison s = compare_sharing(24, 3);
  CHECK(s.front_end_fa == 12);
  CHECK(s.saved_fa == 12);
  CHECK(s.expected_saving == 12);
  CHECK(s.saved_fa == static_cast<std::int64_t>(s.universal_d1.fa_count +
                                                s.classic_mersenne.fa_count -
                                                s.bi_residue.fa_count));
}

TEST_CASE("build dispatches on family")
{
  for (Family f : {Family::ClassicMersenne, Family::ClassicFermat, Family::UniversalD1,
                   Family::BiResidue}) {
    const Generated g = build({24, 3, f});
    CHECK(g.report.family == f);
    CHECK(g.netlist.meta().family == to_string(f));
    CHECK(g.netlist.inputs().size() == 24);
    CHECK(g.report.cost == cost(g.netlist));
  }
}
