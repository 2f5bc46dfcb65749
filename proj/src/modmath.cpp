#include "rgen/modmath.hpp"

#include <sstream>

namespace rgen {

Modulus::Modulus(unsigned n, ModulusKind kind) : n_(n), kind_(kind)
{
  unsigned min_n = kind == ModulusKind::DoubleMersenne ? 1 : 2;
  if (n < min_n || n > kMaxN)
    throw ParameterError("modulus parameter n=" + std::to_string(n) + " out of range [" +
                         std::to_string(min_n) + ", " + std::to_string(kMaxN) + "]");
}

std::uint64_t Modulus::value() const
{
  const std::uint64_t pow = std::uint64_t{1} << n_;
  switch (kind_) {
  case ModulusKind::MersenneLike:
    return pow - 1;
  case ModulusKind::FermatLike:
    return pow + 1;
  case ModulusKind::DoubleMersenne:
    return (std::uint64_t{1} << (2 * n_)) - 1;
  }
  return 0;
}

std::string Modulus::to_string() const
{
  switch (kind_) {
  case ModulusKind::MersenneLike:
    return "2^" + std::to_string(n_) + "-1";
  case ModulusKind::FermatLike:
    return "2^" + std::to_string(n_) + "+1";
  case ModulusKind::DoubleMersenne:
    return "2^" + std::to_string(2 * n_) + "-1";
  }
  return {};
}

std::string to_string(const D1Value& v, unsigned n)
{
  std::ostringstream os;
  os << '(' << (v.zero_flag ? 1 : 0) << ", ";
  for (unsigned i = n; i-- > 0;)
    os << ((v.magnitude >> i) & 1);
  os << ')';
  return os.str();
}

std::uint64_t oracle_residue(std::span<const std::uint8_t> bits, const Modulus& m)
{
  const unsigned __int128 mod = m.value();
  unsigned __int128 r = 0;
  for (std::size_t i = bits.size(); i-- > 0;)
    r = (2 * r + (bits[i] & 1)) % mod;
  return static_cast<std::uint64_t>(r);
}

std::uint64_t oracle_residue(std::uint64_t x, const Modulus& m) { return x % m.value(); }

D1Value d1_encode(std::uint64_t x, unsigned n)
{
  if (n == 0 || n > Modulus::kMaxN)
    throw ParameterError("d1_encode: width out of range");
  if (x > (std::uint64_t{1} << n))
    throw ParameterError("d1_encode: value " + std::to_string(x) + " exceeds 2^" +
                         std::to_string(n));
  if (x == 0)
    return {true, 0};
  return {false, x - 1};
}

std::uint64_t d1_decode(const D1Value& v, unsigned n)
{
  if (n == 0 || n > Modulus::kMaxN)
    throw ParameterError("d1_decode: width out of range");
  if (v.zero_flag && v.magnitude != 0)
    throw ParameterError("d1_decode: non-canonical value (zero flag with nonzero magnitude)");
  if (v.magnitude >> n)
    throw ParameterError("d1_decode: magnitude wider than n bits");
  return (v.zero_flag ? 0 : 1) + v.magnitude;
}

SignedWeight pow2_mod(std::uint64_t k, const Modulus& m)
{
  const unsigned w = m.width();
  SignedWeight sw;
  sw.exponent = static_cast<unsigned>(k % w);
  sw.negative = m.kind() == ModulusKind::FermatLike && ((k / w) & 1);
  return sw;
}

ComplementedBlock neg_block_identity(std::uint64_t block, const Modulus& m)
{
  if (m.kind() != ModulusKind::FermatLike)
    throw ParameterError("neg_block_identity requires a modulus 2^n+1");
  const std::uint64_t mask = (std::uint64_t{1} << m.n()) - 1;
  if (block > mask)
    throw ParameterError("neg_block_identity: block wider than n bits");
  return {mask & ~block, 2};
}

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m)
{
  const auto sm = static_cast<std::int64_t>(m);
  std::int64_t r = v % sm;
  if (r < 0)
    r += sm;
  return static_cast<std::uint64_t>(r);
}

} // namespace rgen
