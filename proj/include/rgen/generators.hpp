#pragma once

// Residue generator builders.
//
//   classic-mersenne  |X|_{2^n-1}: periodic CSA with end-around carry.
//   classic-fermat    |X|_{2^n+1}: odd blocks complemented, inverted EAC,
//                     final adder adds the p-dependent correction COR(p, m).
//   universal-d1      |X|_{2^n+1} in diminished-1 form. A 2n-bit CSA mod
//                     2^2n-1 reduces X to D_C, D_S; the halves feed a fixed
//                     4-operand core mod 2^n+1 that owes no p-dependent
//                     correction.
//   bi-residue        both residues from one shared 2n-bit front-end.

#include "rgen/csa.hpp"
#include "rgen/netlist.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rgen {

enum class Family { ClassicMersenne, ClassicFermat, UniversalD1, BiResidue };

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view s);

struct GeneratorSpec {
  unsigned p = 0;
  unsigned n = 0;
  Family family = Family::UniversalD1;
};

/// Throws ParameterError unless 1 <= p <= kMaxP and 2 <= n <= kMaxN.
void validate(const GeneratorSpec& spec);
inline constexpr unsigned kMaxP = 4096;
inline constexpr unsigned kMaxGeneratorN = 24;

struct StageTable {
  std::string label;
  ShorthandTable table;
};

struct BuildReport {
  Family family = Family::UniversalD1;
  unsigned p = 0;
  unsigned n = 0;
  /// Blocks of width n (classic) or 2n (front-end families).
  unsigned q = 0;
  unsigned q_effective = 0;
  bool padded = false;
  unsigned padding_bits = 0;

  /// p-dependent correction added by the final adder (classic-fermat); 0 on
  /// the D1 path.
  std::uint64_t cor = 0;
  std::int64_t cor_raw = 0;
  std::vector<CorrectionLedger::Entry> ledger;

  /// Ledger of the shared 2n-bit front-end (always 0: no complemented bits).
  std::uint64_t front_end_correction = 0;
  /// Constant hardwired into the D1 final adder.
  std::uint64_t core_constant = 0;
  /// What is still owed after the final adder; 0 for every finished circuit.
  std::uint64_t residual_correction = 0;

  std::size_t front_end_fa = 0;
  std::size_t front_end_ha = 0;
  std::vector<StageTable> tables;
  CostReport cost;
};

struct Generated {
  Netlist netlist;
  BuildReport report;
};

Generated build(const GeneratorSpec& spec);
Generated build_classic_mersenne(unsigned p, unsigned n);
Generated build_classic_fermat(unsigned p, unsigned n);
Generated build_universal_d1(unsigned p, unsigned n);
Generated build_bi_residue(unsigned p, unsigned n);

/// Bi-residue generator against a standalone universal-d1 plus a standalone
/// classic-mersenne generator for the same (p, n).
struct SharingComparison {
  unsigned p = 0;
  unsigned n = 0;
  CostReport universal_d1;
  CostReport classic_mersenne;
  CostReport bi_residue;
  std::size_t front_end_fa = 0;
  std::int64_t saved_fa = 0;
  std::int64_t saved_ha = 0;
  /// p - 4n
  std::int64_t expected_saving = 0;
};

SharingComparison compare_sharing(unsigned p, unsigned n);

// ---------------------------------------------------------------------------
// Building blocks

struct FermatCsaOut {
  /// (c_{n-2} ... c_0 || ~c_{n-1})
  std::vector<Signal> rotated_carry;
  std::vector<Signal> sum;
};

/// One row of n FAs modulo 2^n+1: |x+y+z| = |rotated_carry + sum - 1|.
FermatCsaOut csa_stage_ferm(NetlistBuilder& b, std::span<const Signal> x,
                            std::span<const Signal> y, std::span<const Signal> z);

/// Diminished-1 output for |a + b + 2|_{2^n+1}: ripple a+b, then increment
/// by the complemented carry-out; the incrementer's carry-out is x_z.
D1Output final_adder_ferm_d1(NetlistBuilder& b, std::span<const Signal> a,
                             std::span<const Signal> b_in);
/// Behavioural contract of final_adder_ferm_d1.
D1Value final_adder_ferm_d1_reference(std::uint64_t a, std::uint64_t b, unsigned n);

/// |a + b|_{2^n-1} with 2^n-1 folded to 0.
std::vector<Signal> final_adder_mersenne(NetlistBuilder& b, std::span<const Signal> a,
                                         std::span<const Signal> b_in);
/// |a + b + cor|_{2^n+1} as an (n+1)-bit normal residue.
std::vector<Signal> final_adder_fermat(NetlistBuilder& b, std::span<const Signal> a,
                                       std::span<const Signal> b_in, std::uint64_t cor);

struct SplitVectors {
  std::vector<Signal> dc;
  std::vector<Signal> ds;

  std::span<const Signal> dc_low(unsigned n) const { return std::span(dc).first(n); }
  std::span<const Signal> dc_high(unsigned n) const { return std::span(dc).subspan(n, n); }
  std::span<const Signal> ds_low(unsigned n) const { return std::span(ds).first(n); }
  std::span<const Signal> ds_high(unsigned n) const { return std::span(ds).subspan(n, n); }
};

// Fragments. Each is a self-contained netlist; the generators compose them.

struct FrontEnd {
  Netlist netlist;
  ShorthandTable table;
  CorrectionLedger ledger;
};
/// p inputs -> ports "dc", "ds" (2n bits each, class k at index k).
FrontEnd build_front_end(unsigned p, unsigned n);

struct D1Core {
  Netlist netlist;
  CorrectionLedger ledger;
};
/// 4n inputs (dc then ds) -> D1 port "x".
D1Core build_d1_core(unsigned n);

struct MersenneTail {
  Netlist netlist;
  ShorthandTable table;
};
/// 4n inputs (dc then ds) -> plain port "r" holding |sum of halves|_{2^n-1}.
MersenneTail build_mersenne_tail(unsigned n);

/// Netlist with 3n inputs (x, y, z) and plain ports "c" (rotated carry) and "s".
Netlist csa_stage_ferm_netlist(unsigned n);
/// Netlist with 2n inputs (a, b) and D1 port "x".
Netlist final_adder_ferm_d1_netlist(unsigned n);

} // namespace rgen
