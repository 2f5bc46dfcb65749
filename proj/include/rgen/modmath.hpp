#pragma once

// Reference modular arithmetic for residue generators modulo 2^n-1, 2^n+1
// and 2^2n-1. Nothing in here knows about circuits; the verifiers use these
// functions as the ground truth every netlist is compared against.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace rgen {

class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class ModulusKind { MersenneLike, FermatLike, DoubleMersenne };

class Modulus {
public:
  static constexpr unsigned kMaxN = 31;

  Modulus(unsigned n, ModulusKind kind);

  static Modulus mersenne(unsigned n) { return {n, ModulusKind::MersenneLike}; }
  static Modulus fermat(unsigned n) { return {n, ModulusKind::FermatLike}; }
  static Modulus double_mersenne(unsigned n) { return {n, ModulusKind::DoubleMersenne}; }

  unsigned n() const { return n_; }
  ModulusKind kind() const { return kind_; }
  std::uint64_t value() const;

  /// Number of distinct residue weight classes |2^k|: the period of 2^k
  /// (up to sign for the Fermat-like case).
  unsigned width() const { return kind_ == ModulusKind::DoubleMersenne ? 2 * n_ : n_; }

  std::string to_string() const;

  friend bool operator==(const Modulus&, const Modulus&) = default;

private:
  unsigned n_;
  ModulusKind kind_;
};

/// Diminished-1 value: zero flag plus n-bit magnitude X-1. Always canonical,
/// i.e. zero_flag implies magnitude == 0.
struct D1Value {
  bool zero_flag = true;
  std::uint64_t magnitude = 0;

  friend bool operator==(const D1Value&, const D1Value&) = default;
};

std::string to_string(const D1Value& v, unsigned n);

/// |sum bits[i] * 2^i|_m, Horner's rule over 128-bit intermediates.
std::uint64_t oracle_residue(std::span<const std::uint8_t> bits, const Modulus& m);
std::uint64_t oracle_residue(std::uint64_t x, const Modulus& m);

D1Value d1_encode(std::uint64_t x, unsigned n);
std::uint64_t d1_decode(const D1Value& v, unsigned n);

/// |2^k|_m as a sign and a power of two 2^(k mod width). For the Fermat-like
/// modulus negative means the bit is handled as a complemented signal.
struct SignedWeight {
  bool negative = false;
  unsigned exponent = 0;

  std::uint64_t magnitude() const { return std::uint64_t{1} << exponent; }
  friend bool operator==(const SignedWeight&, const SignedWeight&) = default;
};

SignedWeight pow2_mod(std::uint64_t k, const Modulus& m);

struct ComplementedBlock {
  std::uint64_t complement = 0;
  std::uint64_t correction = 0;
};

/// |-B|_{2^n+1} = |~B + 2|_{2^n+1}; returns ~B and the constant 2.
ComplementedBlock neg_block_identity(std::uint64_t block, const Modulus& m);

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m);

} // namespace rgen
