// rgen: build, verify and export residue generator netlists.
//
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 usage or parameter error.

#include "rgen/export.hpp"
#include "rgen/generators.hpp"
#include "rgen/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string family = "universal-d1";
  unsigned n = 0;
  unsigned p = 0;
  std::string format = "json";
  std::string out;
  std::string mode = "exhaustive";
  std::string contract;
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 42;
  std::uint64_t budget = 0;
  unsigned threads = 0;
  std::string golden_dir = "tests/golden";
  bool json = false;
};

rgen::Family parse_family(const std::string& s)
{
  auto f = rgen::family_from_string(s);
  if (!f)
    throw rgen::ParameterError("unknown family '" + s +
                               "' (classic-mersenne, classic-fermat, universal-d1, bi-residue)");
  return *f;
}

rgen::GeneratorSpec spec_of(const Options& o)
{
  rgen::GeneratorSpec spec{o.p, o.n, parse_family(o.family)};
  rgen::validate(spec);
  return spec;
}

void emit(const Options& o, const std::string& text)
{
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f)
    throw rgen::ParameterError("cannot write '" + o.out + "'");
  f << text;
  if (!f)
    throw rgen::ParameterError("write to '" + o.out + "' failed");
}

std::string netlist_text(const Options& o, const rgen::Netlist& nl)
{
  if (o.format == "json")
    return rgen::export_json(nl);
  if (o.format == "hdl")
    return rgen::export_hdl(nl);
  throw rgen::ParameterError("unknown format '" + o.format + "' (json, hdl)");
}

int cmd_gen(const Options& o)
{
  const rgen::Generated g = rgen::build(spec_of(o));
  if (o.format == "json") {
    rgen::Json j;
    j["report"] = rgen::report_to_json(g.report);
    j["netlist"] = rgen::netlist_to_json(g.netlist);
    emit(o, j.dump(1) + "\n");
  } else {
    std::string header;
    std::istringstream lines(rgen::report_to_text(g.report));
    for (std::string line; std::getline(lines, line);)
      header += "// " + line + "\n";
    emit(o, header + netlist_text(o, g.netlist));
  }
  return 0;
}

int cmd_export(const Options& o)
{
  emit(o, netlist_text(o, rgen::build(spec_of(o)).netlist));
  return 0;
}

int cmd_report(const Options& o)
{
  const rgen::Generated g = rgen::build(spec_of(o));
  if (o.json)
    std::cout << rgen::report_to_json(g.report).dump(1) << "\n";
  else
    std::cout << rgen::report_to_text(g.report);
  return 0;
}

int cmd_table(const Options& o)
{
  const rgen::Generated g = rgen::build(spec_of(o));
  for (const auto& t : g.report.tables) {
    std::cout << t.label << ":\n";
    if (t.table.stages.empty())
      std::cout << "(empty: no CSA stages, operands pass straight to the next block)\n";
    std::cout << rgen::render_shorthand(t.table);
  }
  if (g.report.family == rgen::Family::ClassicFermat)
    std::cout << "COR(" << o.p << ", " << rgen::Modulus::fermat(o.n).value()
              << ") = " << g.report.cor << "\n";
  return 0;
}

int cmd_compare(const Options& o)
{
  if (o.n < 2 || o.p < 1)
    throw rgen::ParameterError("compare needs --p and --n");
  const rgen::SharingComparison c = rgen::compare_sharing(o.p, o.n);
  const bool ok = c.saved_fa == c.expected_saving;
  if (o.json) {
    rgen::Json j;
    j["p"] = c.p;
    j["n"] = c.n;
    j["universal_d1"] = rgen::cost_to_json(c.universal_d1);
    j["classic_mersenne"] = rgen::cost_to_json(c.classic_mersenne);
    j["bi_residue"] = rgen::cost_to_json(c.bi_residue);
    j["front_end_fa"] = c.front_end_fa;
    j["saved_fa"] = c.saved_fa;
    j["saved_ha"] = c.saved_ha;
    j["expected_saved_fa"] = c.expected_saving;
    j["match"] = ok;
    std::cout << j.dump(1) << "\n";
  } else {
    auto row = [](const char* name, const rgen::CostReport& r) {
      std::cout << "  " << name << ": " << r.fa_count << " FA, " << r.ha_count << " HA, depth "
                << r.depth << "\n";
    };
    std::cout << "p = " << c.p << ", n = " << c.n << "\n";
    row("universal-d1    ", c.universal_d1);
    row("classic-mersenne", c.classic_mersenne);
    row("bi-residue      ", c.bi_residue);
    std::cout << "shared front-end FAs: " << c.front_end_fa << "\n";
    std::cout << "saved FAs: " << c.saved_fa << " (p - 4n = " << c.expected_saving << ")\n";
    std::cout << "saved HAs: " << c.saved_ha << "\n";
  }
  return ok ? 0 : kExitFail;
}

int cmd_verify(const Options& o)
{
  rgen::Verdict v;
  if (o.contract == "property1") {
    v = rgen::check_property1(o.n);
  } else if (o.contract == "property2") {
    v = rgen::check_property2(o.n);
  } else if (o.contract == "goldens") {
    v = rgen::check_goldens(o.golden_dir);
  } else if (!o.contract.empty()) {
    throw rgen::ParameterError("unknown contract '" + o.contract + "'");
  } else {
    rgen::SweepPlan plan;
    plan.spec = spec_of(o);
    if (o.mode == "exhaustive")
      plan.mode = rgen::SweepMode::Exhaustive;
    else if (o.mode == "random")
      plan.mode = rgen::SweepMode::Random;
    else
      throw rgen::ParameterError("unknown mode '" + o.mode + "' (exhaustive, random)");
    plan.samples = o.samples;
    plan.seed = o.seed;
    plan.budget = o.budget ? o.budget : rgen::exhaustive_budget();
    plan.threads = o.threads;
    v = rgen::run_sweep(plan);
  }
  if (o.json) {
    std::cout << rgen::verdict_to_json(v).dump(1) << "\n";
  } else {
    std::cout << (v.pass ? "PASS" : "FAIL") << ": " << v.evaluated << " evaluated (" << v.sampler
              << ")\n";
    if (!v.pass)
      std::cout << v.detail << "\n";
  }
  return v.pass ? 0 : kExitFail;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Residue generator netlists modulo 2^n-1 and 2^n+1 (diminished-1 output)"};
  app.require_subcommand(1);
  Options o;

  auto add_build = [&](CLI::App* sub, bool need_family = true) {
    if (need_family)
      sub->add_option("--family", o.family,
                      "classic-mersenne | classic-fermat | universal-d1 | bi-residue");
    sub->add_option("--n", o.n, "modulus parameter")->required();
    sub->add_option("--p", o.p, "input width in bits")->required();
  };

  auto* gen = app.add_subcommand("gen", "build a generator: netlist plus build report");
  add_build(gen);
  gen->add_option("--format", o.format, "json | hdl");
  gen->add_option("--out", o.out, "output path (default stdout)");

  auto* exp = app.add_subcommand("export", "write the netlist as JSON or structural HDL");
  add_build(exp);
  exp->add_option("--format", o.format, "json | hdl");
  exp->add_option("--out", o.out, "output path (default stdout)");

  auto* rep = app.add_subcommand("report", "print the build report and cost");
  add_build(rep);
  rep->add_flag("--json", o.json);

  auto* tab = app.add_subcommand("table", "print the CSA shorthand tables");
  add_build(tab);

  auto* cmp = app.add_subcommand("compare", "bi-residue sharing vs two standalone generators");
  cmp->add_option("--n", o.n)->required();
  cmp->add_option("--p", o.p)->required();
  cmp->add_flag("--json", o.json);

  auto* ver = app.add_subcommand("verify", "check a generator or contract against the oracle");
  ver->add_option("--family", o.family);
  ver->add_option("--n", o.n);
  ver->add_option("--p", o.p);
  ver->add_option("--contract", o.contract, "property1 | property2 | goldens");
  ver->add_option("--mode", o.mode, "exhaustive | random");
  ver->add_option("--samples", o.samples);
  ver->add_option("--seed", o.seed);
  ver->add_option("--budget", o.budget, "exhaustive budget (default $RGEN_EXHAUSTIVE_BUDGET or 2^22)");
  ver->add_option("--threads", o.threads);
  ver->add_option("--golden-dir", o.golden_dir);
  ver->add_flag("--json", o.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen)
      return cmd_gen(o);
    if (*exp)
      return cmd_export(o);
    if (*rep)
      return cmd_report(o);
    if (*tab)
      return cmd_table(o);
    if (*cmp)
      return cmd_compare(o);
    if (*ver)
      return cmd_verify(o);
  } catch (const rgen::ParameterError& e) {
    std::cerr << "rgen: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rgen::BudgetExceeded& e) {
    std::cerr << "rgen: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "rgen: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
