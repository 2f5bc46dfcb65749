#include "rgen/generators.hpp"

#include <algorithm>
#include <array>

namespace rgen {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 4> kFamilies = {{
    {Family::ClassicMersenne, "classic-mersenne"},
    {Family::ClassicFermat, "classic-fermat"},
    {Family::UniversalD1, "universal-d1"},
    {Family::BiResidue, "bi-residue"},
}};

void check_width(std::span<const Signal> a, std::span<const Signal> b, const char* what)
{
  if (a.size() != b.size() || a.empty())
    throw ParameterError(std::string(what) + ": operand widths differ or are empty");
}

struct RippleOut {
  std::vector<Signal> sum;
  Signal carry;
};

// a + b (+ cin). Bit 0 uses a half adder when there is no carry-in.
RippleOut ripple_add(NetlistBuilder& b, std::span<const Signal> x, std::span<const Signal> y,
                     std::optional<Signal> cin = std::nullopt)
{
  RippleOut out;
  std::optional<Signal> carry = cin;
  for (std::size_t i = 0; i < x.size(); ++i) {
    AdderOut a = carry ? b.full_adder(x[i], y[i], *carry) : b.half_adder(x[i], y[i]);
    out.sum.push_back(a.sum.at_class(static_cast<int>(i)));
    carry = a.carry;
  }
  out.carry = *carry;
  return out;
}

RippleOut increment(NetlistBuilder& b, std::span<const Signal> x, Signal inc)
{
  RippleOut out;
  Signal carry = inc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    AdderOut a = b.half_adder(x[i], carry);
    out.sum.push_back(a.sum.at_class(static_cast<int>(i)));
    carry = a.carry;
  }
  out.carry = carry;
  return out;
}

std::vector<Signal> constant_bits(NetlistBuilder& b, std::uint64_t value, std::size_t width)
{
  std::vector<Signal> bits;
  for (std::size_t i = 0; i < width; ++i)
    bits.push_back(((value >> i) & 1) ? b.const1() : b.const0());
  return bits;
}

Signal mux(NetlistBuilder& b, Signal sel, Signal when_set, Signal when_clear)
{
  return b.or_gate(b.and_gate(sel, when_set), b.and_gate(~sel, when_clear));
}

// x >= m ? x - m : x over the width of x.
std::vector<Signal> conditional_subtract(NetlistBuilder& b, std::span<const Signal> x,
                                         std::uint64_t m)
{
  const std::size_t w = x.size();
  const std::uint64_t addend = (std::uint64_t{1} << w) - m;
  auto k = constant_bits(b, addend, w);
  RippleOut d = ripple_add(b, x, k);
  std::vector<Signal> out;
  for (std::size_t i = 0; i < w; ++i)
    out.push_back(mux(b, d.carry, d.sum[i], x[i]).at_class(static_cast<int>(i)));
  return out;
}

// Two-bit-per-class pool -> operand pair, missing bits tied to 0.
std::pair<std::vector<Signal>, std::vector<Signal>> operands(NetlistBuilder& b,
                                                             const BitPool& pool)
{
  std::vector<Signal> first, second;
  for (std::size_t k = 0; k < pool.width(); ++k) {
    const auto& cls = pool[k];
    const int c = static_cast<int>(k);
    first.push_back(cls.size() > 0 ? cls[0].at_class(c) : b.const0().at_class(c));
    second.push_back(cls.size() > 1 ? cls[1].at_class(c) : b.const0().at_class(c));
  }
  return {first, second};
}

std::vector<Signal> complemented(std::span<const Signal> v)
{
  std::vector<Signal> out;
  for (const Signal& s : v)
    out.push_back(~s);
  return out;
}

std::vector<Signal> reclassed(std::span<const Signal> v)
{
  std::vector<Signal> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(v[i].at_class(static_cast<int>(i)));
  return out;
}

Wiring split_wiring(unsigned n)
{
  Wiring w;
  for (unsigned i = 0; i < 2 * n; ++i)
    w.push_back({"dc", i});
  for (unsigned i = 0; i < 2 * n; ++i)
    w.push_back({"ds", i});
  return w;
}

void fill_blocks(BuildReport& r, unsigned block_width, unsigned min_blocks)
{
  r.q = (r.p + block_width - 1) / block_width;
  r.q_effective = std::max(r.q, min_blocks);
  r.padding_bits = r.q_effective * block_width - r.p;
  r.padded = r.padding_bits != 0;
}

} // namespace

namespace {

// Everything owed on the D1 path: the front-end ledger (|.|_{2^2n-1} reduces
// consistently mod 2^n+1) plus the core's complements, inverted EACs and the
// final adder's hardwired constant.
void fill_d1_path(BuildReport& r, const FrontEnd& front, const D1Core& core)
{
  fill_blocks(r, 2 * r.n, 2);
  r.front_end_correction = front.ledger.accumulated();
  r.core_constant = 2;
  const Modulus mod = Modulus::fermat(r.n);
  r.residual_correction =
      reduce_signed(front.ledger.raw_total() + core.ledger.raw_total(), mod.value());
  r.cor = r.residual_correction;
  r.ledger = core.ledger.entries();
  const CostReport fc = cost(front.netlist);
  r.front_end_fa = fc.fa_count;
  r.front_end_ha = fc.ha_count;
}

} // namespace

std::string_view to_string(Family f)
{
  for (const auto& [fam, name] : kFamilies)
    if (fam == f)
      return name;
  return "?";
}

std::optional<Family> family_from_string(std::string_view s)
{
  for (const auto& [fam, name] : kFamilies)
    if (name == s)
      return fam;
  return std::nullopt;
}

void validate(const GeneratorSpec& spec)
{
  if (spec.n < 2 || spec.n > kMaxGeneratorN)
    throw ParameterError("n must be in [2, " + std::to_string(kMaxGeneratorN) + "], got " +
                         std::to_string(spec.n));
  if (spec.p < 1 || spec.p > kMaxP)
    throw ParameterError("p must be in [1, " + std::to_string(kMaxP) + "], got " +
                         std::to_string(spec.p));
}

// ---------------------------------------------------------------------------
// Blocks

FermatCsaOut csa_stage_ferm(NetlistBuilder& b, std::span<const Signal> x,
                            std::span<const Signal> y, std::span<const Signal> z)
{
  check_width(x, y, "csa_stage_ferm");
  check_width(x, z, "csa_stage_ferm");
  const std::size_t n = x.size();
  std::vector<Signal> carry;
  FermatCsaOut out;
  for (std::size_t i = 0; i < n; ++i) {
    AdderOut a = b.full_adder(x[i], y[i], z[i]);
    out.sum.push_back(a.sum.at_class(static_cast<int>(i)));
    carry.push_back(a.carry);
  }
  // 2c = 2(c_{n-2}..c_0) + 2^n c_{n-1} = (c_{n-2}..c_0 || ~c_{n-1}) - 1
  out.rotated_carry.push_back((~carry[n - 1]).at_class(0));
  for (std::size_t i = 1; i < n; ++i)
    out.rotated_carry.push_back(carry[i - 1].at_class(static_cast<int>(i)));
  return out;
}

D1Output final_adder_ferm_d1(NetlistBuilder& b, std::span<const Signal> a,
                             std::span<const Signal> b_in)
{
  check_width(a, b_in, "final_adder_ferm_d1");
  // X* = |a + b + 1|: with u = a + b, X* = u_low + ~c_out; the increment
  // overflows exactly when the result is 2^n, i.e. x_z = 1, magnitude 0.
  RippleOut u = ripple_add(b, a, b_in);
  RippleOut t = increment(b, u.sum, ~u.carry);
  return D1Output{t.carry, t.sum};
}

D1Value final_adder_ferm_d1_reference(std::uint64_t a, std::uint64_t b, unsigned n)
{
  const std::uint64_t m = Modulus::fermat(n).value();
  return d1_encode((a + b + 2) % m, n);
}

std::vector<Signal> final_adder_mersenne(NetlistBuilder& b, std::span<const Signal> a,
                                         std::span<const Signal> b_in)
{
  check_width(a, b_in, "final_adder_mersenne");
  RippleOut u = ripple_add(b, a, b_in);
  // End-around carry: v = a + b - c(2^n - 1) never exceeds 2^n - 1, and the
  // all-ones pattern is then folded to the canonical 0.
  std::vector<Signal> v = increment(b, u.sum, u.carry).sum;
  Signal all_ones = v[0];
  for (std::size_t i = 1; i < v.size(); ++i)
    all_ones = b.and_gate(all_ones, v[i]);
  for (Signal& bit : v)
    bit = b.and_gate(bit, ~all_ones).at_class(bit.weight_class);
  return v;
}

std::vector<Signal> final_adder_fermat(NetlistBuilder& b, std::span<const Signal> a,
                                       std::span<const Signal> b_in, std::uint64_t cor)
{
  check_width(a, b_in, "final_adder_fermat");
  const std::size_t n = a.size();
  const std::uint64_t m = (std::uint64_t{1} << n) + 1;
  if (cor >= m)
    throw ParameterError("final_adder_fermat: correction must be reduced mod 2^n+1");

  // a + b + cor < 3m, held in n+2 bits, then two conditional subtractions.
  RippleOut u = ripple_add(b, a, b_in);
  std::vector<Signal> t = u.sum;
  t.push_back(u.carry.at_class(static_cast<int>(n)));
  t.push_back(b.const0().at_class(static_cast<int>(n + 1)));
  if (cor != 0)
    t = ripple_add(b, t, constant_bits(b, cor, n + 2)).sum;
  t = conditional_subtract(b, t, m);
  t = conditional_subtract(b, t, m);
  t.pop_back();
  return t;
}

Netlist csa_stage_ferm_netlist(unsigned n)
{
  NetlistBuilder b;
  std::vector<Signal> x, y, z;
  for (auto* v : {&x, &y, &z})
    for (unsigned i = 0; i < n; ++i)
      v->push_back(b.add_input(static_cast<int>(i)));
  FermatCsaOut out = csa_stage_ferm(b, x, y, z);
  b.add_output({"c", PlainResidue{out.rotated_carry, 0}});
  b.add_output({"s", PlainResidue{out.sum, 0}});
  return b.build({"csa-stage-ferm", 3 * n, n, 0});
}

Netlist final_adder_ferm_d1_netlist(unsigned n)
{
  NetlistBuilder b;
  std::vector<Signal> x, y;
  for (auto* v : {&x, &y})
    for (unsigned i = 0; i < n; ++i)
      v->push_back(b.add_input(static_cast<int>(i)));
  b.add_output({"x", final_adder_ferm_d1(b, x, y)});
  return b.build({"final-adder-ferm-d1", 2 * n, n, 0});
}

// ---------------------------------------------------------------------------
// Fragments

FrontEnd build_front_end(unsigned p, unsigned n)
{
  const Modulus mod = Modulus::double_mersenne(n);
  auto pb = build_pool(p, mod);
  ReduceResult red = reduce(pb.builder, std::move(pb.build.pool), 2, EacPolicy::Plain);
  CorrectionLedger ledger = std::move(pb.build.ledger);
  ledger.merge(red.delta);

  auto [dc, ds] = operands(pb.builder, red.pool);
  pb.builder.add_output({"dc", PlainResidue{dc, 0}});
  pb.builder.add_output({"ds", PlainResidue{ds, 0}});
  return {pb.builder.build({"front-end", p, n, 0}), std::move(red.table), std::move(ledger)};
}

D1Core build_d1_core(unsigned n)
{
  NetlistBuilder b;
  SplitVectors v;
  for (unsigned i = 0; i < 2 * n; ++i)
    v.dc.push_back(b.add_input(static_cast<int>(i)));
  for (unsigned i = 0; i < 2 * n; ++i)
    v.ds.push_back(b.add_input(static_cast<int>(i)));

  const Modulus mod = Modulus::fermat(n);
  CorrectionLedger ledger(mod);
  const auto half = static_cast<std::int64_t>((std::uint64_t{1} << n) - 1);

  // |X| = |D_CL - D_CH + D_SL - D_SH|; -D_H = ~D_H + 2 (charged as -(2^n-1)).
  auto dcl = reclassed(v.dc_low(n));
  auto dch = complemented(reclassed(v.dc_high(n)));
  auto dsl = reclassed(v.ds_low(n));
  auto dsh = complemented(reclassed(v.ds_high(n)));

  ledger.charge(-half, "~D_CH");
  FermatCsaOut s1 = csa_stage_ferm(b, dcl, dch, dsl);
  ledger.charge(-1, "stage 1 inverted EAC");
  ledger.charge(-half, "~D_SH");
  FermatCsaOut s2 = csa_stage_ferm(b, s1.rotated_carry, s1.sum, dsh);
  ledger.charge(-1, "stage 2 inverted EAC");

  b.add_output({"x", final_adder_ferm_d1(b, s2.rotated_carry, s2.sum)});
  ledger.charge(-2, "final adder +2");
  return {b.build({"d1-core", 4 * n, n, 0}), std::move(ledger)};
}

MersenneTail build_mersenne_tail(unsigned n)
{
  NetlistBuilder b;
  std::vector<Signal> in;
  for (unsigned i = 0; i < 4 * n; ++i)
    in.push_back(b.add_input(static_cast<int>(i % (2 * n))));
  PoolBuild pool = build_pool(in, Modulus::mersenne(n));
  ReduceResult red = reduce(b, std::move(pool.pool), 2, EacPolicy::Plain);
  auto [x, y] = operands(b, red.pool);
  b.add_output({"r", PlainResidue{reclassed(final_adder_mersenne(b, x, y)), 0}});
  return {b.build({"mersenne-tail", 4 * n, n, 0}), std::move(red.table)};
}

// ---------------------------------------------------------------------------
// Generators

Generated build_classic_mersenne(unsigned p, unsigned n)
{
  validate({p, n, Family::ClassicMersenne});
  auto pb = build_pool(p, Modulus::mersenne(n));
  ReduceResult red = reduce(pb.builder, std::move(pb.build.pool), 2, EacPolicy::Plain);
  auto [x, y] = operands(pb.builder, red.pool);
  pb.builder.add_output(
      {"r", PlainResidue{reclassed(final_adder_mersenne(pb.builder, x, y)), 0}});

  Generated g{pb.builder.build({std::string(to_string(Family::ClassicMersenne)), p, n, 0}), {}};
  BuildReport& r = g.report;
  r.family = Family::ClassicMersenne;
  r.p = p;
  r.n = n;
  fill_blocks(r, n, 1);
  r.tables.push_back({"CSA mod " + Modulus::mersenne(n).to_string(), std::move(red.table)});
  r.cost = cost(g.netlist);
  return g;
}

Generated build_classic_fermat(unsigned p, unsigned n)
{
  validate({p, n, Family::ClassicFermat});
  const Modulus mod = Modulus::fermat(n);
  auto pb = build_pool(p, mod);
  ReduceResult red = reduce(pb.builder, std::move(pb.build.pool), 2, EacPolicy::Inverted);
  CorrectionLedger ledger = std::move(pb.build.ledger);
  ledger.merge(red.delta);
  const std::uint64_t cor = ledger.accumulated();

  auto [x, y] = operands(pb.builder, red.pool);
  pb.builder.add_output(
      {"r", PlainResidue{reclassed(final_adder_fermat(pb.builder, x, y, cor)), 0}});

  Generated g{pb.builder.build({std::string(to_string(Family::ClassicFermat)), p, n, cor}), {}};
  BuildReport& r = g.report;
  r.family = Family::ClassicFermat;
  r.p = p;
  r.n = n;
  fill_blocks(r, n, 1);
  r.cor = cor;
  r.cor_raw = ledger.raw_total();
  r.ledger = ledger.entries();
  r.tables.push_back({"CSA mod " + mod.to_string(), std::move(red.table)});
  r.cost = cost(g.netlist);
  return g;
}

Generated build_universal_d1(unsigned p, unsigned n)
{
  validate({p, n, Family::UniversalD1});
  FrontEnd front = build_front_end(p, n);
  D1Core core = build_d1_core(n);

  Generated g{compose(front.netlist, core.netlist, split_wiring(n),
                      {std::string(to_string(Family::UniversalD1)), p, n, 0}),
              {}};
  BuildReport& r = g.report;
  r.family = Family::UniversalD1;
  r.p = p;
  r.n = n;
  fill_d1_path(r, front, core);
  r.tables.push_back({"front-end CSA mod " + Modulus::double_mersenne(n).to_string(),
                      std::move(front.table)});
  r.cost = cost(g.netlist);
  return g;
}

Generated build_bi_residue(unsigned p, unsigned n)
{
  validate({p, n, Family::BiResidue});
  FrontEnd front = build_front_end(p, n);
  D1Core core = build_d1_core(n);
  MersenneTail tail = build_mersenne_tail(n);

  const Wiring wiring = split_wiring(n);
  const std::array<BackEnd, 2> backs = {BackEnd{std::cref(tail.netlist), wiring},
                                        BackEnd{std::cref(core.netlist), wiring}};
  Generated g{compose(front.netlist, backs, {std::string(to_string(Family::BiResidue)), p, n, 0}),
              {}};
  BuildReport& r = g.report;
  r.family = Family::BiResidue;
  r.p = p;
  r.n = n;
  fill_d1_path(r, front, core);
  r.tables.push_back({"front-end CSA mod " + Modulus::double_mersenne(n).to_string(),
                      std::move(front.table)});
  r.tables.push_back({"tail CSA mod " + Modulus::mersenne(n).to_string(), std::move(tail.table)});
  r.cost = cost(g.netlist);
  return g;
}

Generated build(const GeneratorSpec& spec)
{
  switch (spec.family) {
  case Family::ClassicMersenne:
    return build_classic_mersenne(spec.p, spec.n);
  case Family::ClassicFermat:
    return build_classic_fermat(spec.p, spec.n);
  case Family::UniversalD1:
    return build_universal_d1(spec.p, spec.n);
  case Family::BiResidue:
    return build_bi_residue(spec.p, spec.n);
  }
  throw ParameterError("unknown family");
}

SharingComparison compare_sharing(unsigned p, unsigned n)
{
  validate({p, n, Family::BiResidue});
  if (p < 4 * n)
    throw ParameterError("compare: p must be at least 4n");
  SharingComparison c;
  c.p = p;
  c.n = n;
  c.universal_d1 = build_universal_d1(p, n).report.cost;
  c.classic_mersenne = build_classic_mersenne(p, n).report.cost;
  const Generated bi = build_bi_residue(p, n);
  c.bi_residue = bi.report.cost;
  c.front_end_fa = bi.report.front_end_fa;
  auto as_signed = [](std::size_t v) { return static_cast<std::int64_t>(v); };
  c.saved_fa = as_signed(c.universal_d1.fa_count + c.classic_mersenne.fa_count) -
               as_signed(c.bi_residue.fa_count);
  c.saved_ha = as_signed(c.universal_d1.ha_count + c.classic_mersenne.ha_count) -
               as_signed(c.bi_residue.ha_count);
  c.expected_saving = as_signed(p) - 4 * as_signed(n);
  return c;
}

} // namespace rgen
