#include "rgen/export.hpp"

#include <doctest.h>

using namespace rgen;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle)
{
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

void check_same_behaviour(const Netlist& a, const Netlist& b, unsigned p)
{
  PackedSimulator sa(a), sb(b);
  std::vector<std::uint64_t> xs;
  for (std::uint64_t first = 0; first < (std::uint64_t{1} << p); first += 64) {
    xs.clear();
    for (std::uint64_t x = first; x < std::min(first + 64, std::uint64_t{1} << p); ++x)
      xs.push_back(x);
    const auto lanes = pack_inputs(xs, p);
    sa.run(lanes);
    sb.run(lanes);
    for (std::size_t port = 0; port < a.outputs().size(); ++port)
      for (unsigned lane = 0; lane < xs.size(); ++lane)
        REQUIRE(sa.port_value(port, lane).value == sb.port_value(port, lane).value);
  }
}

} // namespace

TEST_CASE("JSON round-trip preserves behaviour and cost")
{
  for (Family f : {Family::UniversalD1, Family::BiResidue, Family::ClassicFermat}) {
    const Generated g = build({8, 2, f});
    const std::string text = export_json(g.netlist);
    const Netlist back = import_json(text);
    CHECK(back.meta().family == g.netlist.meta().family);
    CHECK(back.meta().cor == g.netlist.meta().cor);
    CHECK(cost(back) == cost(g.netlist));
    CHECK(export_json(back) == text);
    check_same_behaviour(g.netlist, back, 8);
  }
}

TEST_CASE("JSON layout")
{
  const Generated g = build_universal_d1(8, 2);
  const Json j = netlist_to_json(g.netlist);
  CHECK(j.at("meta").at("family") == "universal-d1");
  CHECK(j.at("inputs").size() == 8);
  CHECK(j.at("outputs").at("x").at("kind") == "d1");
  CHECK(j.at("outputs").at("x").at("mag").size() == 2);
  const Json& first = j.at("gates").at(0);
  CHECK(first.contains("id"));
  CHECK(first.at("in").at(0).contains("inv"));
}

TEST_CASE("malformed JSON is rejected")
{
  CHECK_THROWS_AS(import_json("{"), NetlistError);
  CHECK_THROWS_AS(import_json("{}"), NetlistError);
  Json j = netlist_to_json(build_classic_mersenne(6, 3).netlist);
  j["gates"][0]["kind"] = "XOR";
  CHECK_THROWS_AS(netlist_from_json(j), NetlistError);
  j = netlist_to_json(build_classic_mersenne(6, 3).netlist);
  j["gates"][0]["in"][0]["wire"] = 100000;
  CHECK_THROWS_AS(netlist_from_json(j), NetlistError);
  j = netlist_to_json(build_classic_mersenne(6, 3).netlist);
  j["outputs"]["r"]["kind"] = "weird";
  CHECK_THROWS_AS(netlist_from_json(j), NetlistError);
}

TEST_CASE("HDL export structure")
{
  NetlistBuilder b;
  Signal a = b.add_input(), c = b.add_input(), d = b.add_input();
  AdderOut o = b.full_adder(a, ~c, d);
  b.add_output({"y", PlainResidue{{o.sum.at_class(0), o.carry.at_class(1)}, 0}});
  const std::string v = export_hdl(b.build({"toy", 3, 2, 0}));
  CHECK(count_of(v, "rg_fa u") == 1);
  CHECK(count_of(v, "rg_ha u") == 0);
  CHECK(v.find("module rg_toy_n2_p3(") != std::string::npos);
  CHECK(v.find("input [2:0] x;") != std::string::npos);
  CHECK(v.find("output [1:0] y;") != std::string::npos);
  CHECK(count_of(v, "not ") == 1);
  CHECK(count_of(v, "endmodule") == 3);

  const Generated g = build_bi_residue(24, 3);
  const std::string bi = export_hdl(g.netlist);
  CHECK(bi.find("module rg_bi_residue_n3_p24(x, r, x_z, mag);") != std::string::npos);
  CHECK(count_of(bi, "rg_fa u") == g.report.cost.fa_count);
  CHECK(count_of(bi, "rg_ha u") == g.report.cost.ha_count);
  CHECK(export_hdl(g.netlist, "top").find("module top(") != std::string::npos);
}

TEST_CASE("report rendering")
{
  const BuildReport r = build_classic_fermat(16, 3).report;
  CHECK(report_to_text(r).find("COR(16, 9) = |-19|_9 = 8") != std::string::npos);
  const Json j = report_to_json(r);
  CHECK(j.at("cor") == 8);
  CHECK(j.at("family") == "classic-fermat");

  const BuildReport u = build_universal_d1(20, 3).report;
  CHECK(report_to_json(u).at("residual_correction") == 0);
  CHECK(report_to_text(u).find("residual correction on D1 path: 0") != std::string::npos);

  CHECK(report_to_json(build_bi_residue(24, 3).report).at("shared_fa") == 12);

  Verdict v;
  v.pass = false;
  v.counterexample = 5;
  const Json jv = verdict_to_json(v);
  CHECK(jv.at("pass") == false);
  CHECK(jv.at("counterexample") == 5);
}
