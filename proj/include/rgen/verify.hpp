#pragma once

// Equivalence harness: compares generator netlists against the modmath
// oracle over exhaustive or seeded-random input sets.

#include "rgen/generators.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace rgen {

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultExhaustiveBudget = std::uint64_t{1} << 22;
inline constexpr const char* kBudgetEnvVar = "RGEN_EXHAUSTIVE_BUDGET";
inline constexpr const char* kRandomEngine = "mt19937_64";

/// kDefaultExhaustiveBudget unless RGEN_EXHAUSTIVE_BUDGET holds a positive
/// integer.
std::uint64_t exhaustive_budget();

enum class SweepMode { Exhaustive, Random };

struct SweepPlan {
  SweepMode mode = SweepMode::Exhaustive;
  GeneratorSpec spec;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultExhaustiveBudget;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
};

struct Verdict {
  bool pass = true;
  std::optional<std::uint64_t> counterexample;
  std::string detail;
  std::uint64_t evaluated = 0;
  /// "exhaustive" or the random engine name.
  std::string sampler;
};

/// Builds the planned generator and sweeps it.
Verdict run_sweep(const SweepPlan& plan);
/// Sweeps an already-built netlist whose ports follow `plan.spec.family`.
Verdict run_sweep(const Netlist& nl, const SweepPlan& plan);

/// Re-evaluates one input; returns the mismatch description or nullopt.
std::optional<std::string> check_input(const Netlist& nl, const GeneratorSpec& spec,
                                       std::uint64_t x);

/// Random sample sequence used by run_sweep: mt19937_64(seed), masked to p bits.
std::vector<std::uint64_t> random_samples(std::uint64_t count, std::uint64_t seed, unsigned p);

/// |x+y+z| = |rotated_carry + sum - 1| mod 2^n+1 over all 2^3n triples.
Verdict check_property1(unsigned n);
/// final_adder_ferm_d1 matches |a+b+2| in D1 form over all 2^2n pairs.
Verdict check_property2(unsigned n);

/// |X|_{2^n±1} = ||X|_{2^2n-1}|_{2^n±1} for every p-bit X.
Verdict check_nesting_identity(unsigned n, unsigned p);

/// Shorthand tables and COR values for classic-fermat n=3, p in {16,17,18}
/// against fig1_p{p}_m9.txt and table1_m9.txt in `golden_dir`.
Verdict check_goldens(const std::filesystem::path& golden_dir);

} // namespace rgen
