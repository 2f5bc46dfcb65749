#pragma once

// Carry-save reduction of weighted bit pools modulo 2^n-1, 2^n+1 and 2^2n-1.
//
// Input bits are grouped into weight classes G_k by the periodicity of
// |2^i|_m. For 2^n+1 a bit of negative weight enters its class complemented
// and the CorrectionLedger is charged -2^k, so the pool value plus the ledger
// always equals the residue of the input.

#include "rgen/modmath.hpp"
#include "rgen/netlist.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rgen {

struct Block {
  std::size_t index = 0;
  std::size_t first_bit = 0;
  std::size_t live = 0;
  std::size_t padding = 0;
};

/// Splits p bits into ceil(p/w) blocks of w bits, LSB block first; only the
/// top block can carry zero padding.
std::vector<Block> partition_blocks(std::size_t p, std::size_t w);

class CorrectionLedger {
public:
  struct Entry {
    std::string label;
    std::int64_t amount;
  };

  explicit CorrectionLedger(Modulus m) : modulus_(m) {}

  void charge(std::int64_t amount, std::string label);
  void merge(const CorrectionLedger& other);

  const Modulus& modulus() const { return modulus_; }
  /// Constant to add to the pool value, reduced into [0, m).
  std::uint64_t accumulated() const { return reduce_signed(raw_total_, modulus_.value()); }
  std::int64_t raw_total() const { return raw_total_; }
  const std::vector<Entry>& entries() const { return entries_; }

private:
  Modulus modulus_;
  std::int64_t raw_total_ = 0;
  std::vector<Entry> entries_;
};

class BitPool {
public:
  explicit BitPool(Modulus m) : modulus_(m), classes_(m.width()) {}

  const Modulus& modulus() const { return modulus_; }
  std::size_t width() const { return classes_.size(); }
  std::vector<Signal>& operator[](std::size_t k) { return classes_[k]; }
  const std::vector<Signal>& operator[](std::size_t k) const { return classes_[k]; }
  std::vector<std::size_t> counts() const;
  std::size_t total_bits() const;
  std::size_t max_count() const;
  void grow(std::size_t width) { classes_.resize(width); }

  /// All bits as one plain port (each bit tagged with its class).
  PlainResidue as_plain(std::uint64_t correction = 0) const;

private:
  Modulus modulus_;
  std::vector<std::vector<Signal>> classes_;
};

struct PoolBuild {
  BitPool pool;
  CorrectionLedger ledger;
  std::vector<Block> blocks;
};

/// Distributes `inputs` (bit i at position i) into weight classes. Bits with
/// negative weight mod 2^n+1 are complemented and charged to the ledger per
/// block. Padding bits never enter the pool.
PoolBuild build_pool(std::span<const Signal> inputs, const Modulus& m);

struct PoolWithBuilder {
  NetlistBuilder builder;
  PoolBuild build;
};
/// Fresh builder with p primary inputs already pooled.
PoolWithBuilder build_pool(unsigned p, const Modulus& m);

enum class EacPolicy { None, Plain, Inverted };

struct Allocation {
  std::size_t full_adders = 0;
  std::size_t half_adders = 0;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct ShorthandStage {
  std::vector<std::size_t> entering;
  std::vector<Allocation> allocation;
};

struct ShorthandTable {
  std::size_t width = 0;
  std::vector<ShorthandStage> stages;
  std::vector<std::size_t> final_counts;

  std::size_t full_adders() const;
  std::size_t half_adders() const;
  /// Checks entering(s+1) = entering(s) - 2 FA - HA + carries from class k-1.
  bool consistent(EacPolicy policy) const;
};

struct ReduceResult {
  BitPool pool;
  ShorthandTable table;
  CorrectionLedger delta;
};

class ScheduleError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Synchronous greedy reduction: every class over `target` packs floor(c/3)
/// FAs per stage, carries land in the next class at the next stage, and a
/// half adder is added in a class with c mod 3 == 2 only when that strictly
/// lowers the total stage count.
ReduceResult reduce(NetlistBuilder& builder, BitPool pool, std::size_t target, EacPolicy policy);

/// Fixed-width text: a header of class labels, then alternating count and
/// allocation rows, one allocation row per stage.
std::string render_shorthand(const ShorthandTable& t);

} // namespace rgen
