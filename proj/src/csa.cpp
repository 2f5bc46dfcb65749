#include "rgen/csa.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace rgen {

std::vector<Block> partition_blocks(std::size_t p, std::size_t w)
{
  if (p == 0 || w == 0)
    throw ParameterError("partition_blocks: p and w must be positive");
  const std::size_t r = (p + w - 1) / w;
  std::vector<Block> blocks;
  for (std::size_t j = 0; j < r; ++j) {
    Block b;
    b.index = j;
    b.first_bit = j * w;
    b.live = std::min(w, p - b.first_bit);
    b.padding = w - b.live;
    blocks.push_back(b);
  }
  return blocks;
}

// ---------------------------------------------------------------------------

void CorrectionLedger::charge(std::int64_t amount, std::string label)
{
  raw_total_ += amount;
  entries_.push_back({std::move(label), amount});
}

void CorrectionLedger::merge(const CorrectionLedger& other)
{
  if (!(other.modulus_ == modulus_))
    throw ParameterError("cannot merge ledgers of different moduli");
  for (const Entry& e : other.entries_)
    charge(e.amount, e.label);
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> BitPool::counts() const
{
  std::vector<std::size_t> c;
  for (const auto& cls : classes_)
    c.push_back(cls.size());
  return c;
}

std::size_t BitPool::total_bits() const
{
  std::size_t t = 0;
  for (const auto& cls : classes_)
    t += cls.size();
  return t;
}

std::size_t BitPool::max_count() const
{
  std::size_t m = 0;
  for (const auto& cls : classes_)
    m = std::max(m, cls.size());
  return m;
}

PlainResidue BitPool::as_plain(std::uint64_t correction) const
{
  PlainResidue out;
  for (std::size_t k = 0; k < classes_.size(); ++k)
    for (const Signal& s : classes_[k])
      out.bits.push_back(s.at_class(static_cast<int>(k)));
  out.correction = correction;
  return out;
}

PoolBuild build_pool(std::span<const Signal> inputs, const Modulus& m)
{
  PoolBuild pb{BitPool(m), CorrectionLedger(m), {}};
  if (inputs.empty())
    return pb;
  pb.blocks = partition_blocks(inputs.size(), m.width());
  for (const Block& b : pb.blocks) {
    std::int64_t block_charge = 0;
    bool negative = false;
    for (std::size_t i = b.first_bit; i < b.first_bit + b.live; ++i) {
      const SignedWeight sw = pow2_mod(i, m);
      Signal s = inputs[i].at_class(static_cast<int>(sw.exponent));
      if (sw.negative) {
        // -2^k x = 2^k ~x - 2^k
        s = ~s;
        block_charge -= static_cast<std::int64_t>(sw.magnitude());
        negative = true;
      }
      pb.pool[sw.exponent].push_back(s);
    }
    if (negative)
      pb.ledger.charge(block_charge, "B" + std::to_string(b.index));
  }
  return pb;
}

PoolWithBuilder build_pool(unsigned p, const Modulus& m)
{
  PoolWithBuilder out{NetlistBuilder{}, PoolBuild{BitPool(m), CorrectionLedger(m), {}}};
  std::vector<Signal> inputs;
  for (unsigned i = 0; i < p; ++i)
    inputs.push_back(out.builder.add_input());
  out.build = build_pool(inputs, m);
  return out;
}

// ---------------------------------------------------------------------------
// Scheduling

namespace {

using Counts = std::vector<std::size_t>;

bool done(const Counts& c, std::size_t target)
{
  return std::all_of(c.begin(), c.end(), [&](std::size_t x) { return x <= target; });
}

std::vector<Allocation> allocate(const Counts& c, std::size_t target, std::uint64_t ha_mask,
                                 const std::vector<std::size_t>& candidates)
{
  std::vector<Allocation> a(c.size());
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] > target)
      a[k].full_adders = c[k] / 3;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (ha_mask >> i & 1)
      a[candidates[i]].half_adders = 1;
  return a;
}

Counts advance(const Counts& c, const std::vector<Allocation>& a, EacPolicy policy)
{
  const std::size_t w = c.size();
  const bool grows = policy == EacPolicy::None &&
                     (a[w - 1].full_adders + a[w - 1].half_adders) > 0;
  Counts next(grows ? w + 1 : w, 0);
  for (std::size_t k = 0; k < w; ++k) {
    const std::size_t adders = a[k].full_adders + a[k].half_adders;
    next[k] += c[k] - 2 * a[k].full_adders - a[k].half_adders;
    const std::size_t dest = k + 1 < w || grows ? k + 1 : 0;
    next[dest] += adders;
  }
  return next;
}

std::size_t greedy_stages(Counts c, std::size_t target, EacPolicy policy)
{
  std::size_t stages = 0;
  while (!done(c, target)) {
    c = advance(c, allocate(c, target, 0, {}), policy);
    ++stages;
  }
  return stages;
}

constexpr std::size_t kMaxHalfAdderCandidates = 12;

std::vector<Allocation> plan_stage(const Counts& c, std::size_t target, EacPolicy policy)
{
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] > target && c[k] % 3 == 2)
      candidates.push_back(k);

  auto base = allocate(c, target, 0, candidates);
  if (candidates.empty())
    return base;

  const std::size_t base_stages = 1 + greedy_stages(advance(c, base, policy), target, policy);
  std::size_t best_stages = base_stages;
  std::size_t best_has = 0;
  std::uint64_t best_mask = 0;

  auto consider = [&](std::uint64_t mask) {
    const auto alloc = allocate(c, target, mask, candidates);
    const std::size_t stages = 1 + greedy_stages(advance(c, alloc, policy), target, policy);
    const auto has = static_cast<std::size_t>(std::popcount(mask));
    if (stages < best_stages || (stages == best_stages && best_mask != 0 && has < best_has)) {
      best_stages = stages;
      best_has = has;
      best_mask = mask;
    }
  };

  if (candidates.size() <= kMaxHalfAdderCandidates) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << candidates.size()); ++mask)
      consider(mask);
  } else {
    consider((std::uint64_t{1} << candidates.size()) - 1);
  }
  return allocate(c, target, best_mask, candidates);
}

} // namespace

std::size_t ShorthandTable::full_adders() const
{
  std::size_t n = 0;
  for (const auto& s : stages)
    for (const auto& a : s.allocation)
      n += a.full_adders;
  return n;
}

std::size_t ShorthandTable::half_adders() const
{
  std::size_t n = 0;
  for (const auto& s : stages)
    for (const auto& a : s.allocation)
      n += a.half_adders;
  return n;
}

bool ShorthandTable::consistent(EacPolicy policy) const
{
  for (std::size_t s = 0; s < stages.size(); ++s) {
    Counts next = advance(stages[s].entering, stages[s].allocation, policy);
    const Counts& actual = s + 1 < stages.size() ? stages[s + 1].entering : final_counts;
    next.resize(std::max(next.size(), actual.size()), 0);
    Counts padded = actual;
    padded.resize(next.size(), 0);
    if (next != padded)
      return false;
  }
  return true;
}

ReduceResult reduce(NetlistBuilder& builder, BitPool pool, std::size_t target, EacPolicy policy)
{
  if (target < 2)
    throw ScheduleError("reduce: carry-save reduction cannot go below 2 bits per class");
  const ModulusKind kind = pool.modulus().kind();
  if (policy == EacPolicy::Inverted && kind != ModulusKind::FermatLike)
    throw ScheduleError("reduce: inverted end-around carry requires a modulus 2^n+1");
  if (policy == EacPolicy::Plain && kind == ModulusKind::FermatLike)
    throw ScheduleError("reduce: plain end-around carry is invalid modulo 2^n+1");

  ReduceResult res{BitPool(pool.modulus()), ShorthandTable{}, CorrectionLedger(pool.modulus())};
  res.table.width = pool.width();

  std::size_t stage_no = 0;
  while (pool.max_count() > target) {
    ++stage_no;
    const Counts entering = pool.counts();
    const auto alloc = plan_stage(entering, target, policy);
    const std::size_t w = pool.width();
    const bool grows = policy == EacPolicy::None &&
                       (alloc[w - 1].full_adders + alloc[w - 1].half_adders) > 0;

    BitPool next(pool.modulus());
    next.grow(grows ? w + 1 : w);
    std::vector<std::vector<Signal>> carries(next.width());
    std::int64_t wrapped = 0;

    for (std::size_t k = 0; k < w; ++k) {
      const auto& bits = pool[k];
      std::size_t at = 0;
      std::vector<Signal> sums;
      const bool wraps = k + 1 == w && !grows;
      const std::size_t dest = wraps ? 0 : k + 1;
      auto emit_carry = [&](Signal c) {
        c = c.at_class(static_cast<int>(dest));
        if (wraps && policy == EacPolicy::Inverted) {
          // 2^n = -1: -c = ~c - 1
          c = ~c;
          ++wrapped;
        }
        carries[dest].push_back(c);
      };
      for (std::size_t f = 0; f < alloc[k].full_adders; ++f, at += 3) {
        auto out = builder.full_adder(bits[at], bits[at + 1], bits[at + 2]);
        sums.push_back(out.sum.at_class(static_cast<int>(k)));
        emit_carry(out.carry);
      }
      for (std::size_t h = 0; h < alloc[k].half_adders; ++h, at += 2) {
        auto out = builder.half_adder(bits[at], bits[at + 1]);
        sums.push_back(out.sum.at_class(static_cast<int>(k)));
        emit_carry(out.carry);
      }
      next[k].assign(bits.begin() + static_cast<std::ptrdiff_t>(at), bits.end());
      next[k].insert(next[k].end(), sums.begin(), sums.end());
    }
    for (std::size_t k = 0; k < next.width(); ++k)
      next[k].insert(next[k].end(), carries[k].begin(), carries[k].end());

    if (wrapped)
      res.delta.charge(-wrapped, "stage " + std::to_string(stage_no));
    res.table.stages.push_back({entering, alloc});
    pool = std::move(next);
  }
  res.table.width = pool.width();
  res.table.final_counts = pool.counts();
  res.pool = std::move(pool);
  return res;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string allocation_text(const Allocation& a)
{
  auto part = [](std::size_t count, const char* name) -> std::string {
    if (count == 0)
      return {};
    if (count == 1)
      return name;
    return std::to_string(count) + " " + name + "s";
  };
  std::string fa = part(a.full_adders, "FA");
  std::string ha = part(a.half_adders, "HA");
  if (fa.empty() && ha.empty())
    return "-";
  if (fa.empty())
    return ha;
  if (ha.empty())
    return fa;
  return fa + " " + ha;
}

} // namespace

std::string render_shorthand(const ShorthandTable& t)
{
  const std::size_t w = t.width;
  // Columns are printed from the highest class down to G0.
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> labels;

  std::vector<std::string> header;
  for (std::size_t k = w; k-- > 0;)
    header.push_back("G" + std::to_string(k));

  auto count_row = [&](const Counts& c) {
    std::vector<std::string> r;
    for (std::size_t k = w; k-- > 0;)
      r.push_back(std::to_string(k < c.size() ? c[k] : 0));
    return r;
  };

  if (!t.stages.empty()) {
    for (std::size_t s = 0; s < t.stages.size(); ++s) {
      rows.push_back(count_row(t.stages[s].entering));
      labels.emplace_back();
      std::vector<std::string> r;
      for (std::size_t k = w; k-- > 0;)
        r.push_back(k < t.stages[s].allocation.size() ? allocation_text(t.stages[s].allocation[k])
                                                     : "-");
      rows.push_back(std::move(r));
      labels.push_back("CSA Stage " + std::to_string(s + 1));
    }
    rows.push_back(count_row(t.final_counts));
    labels.emplace_back();
  }

  std::vector<std::size_t> colw(w, 0);
  for (std::size_t c = 0; c < w; ++c) {
    colw[c] = header[c].size();
    for (const auto& r : rows)
      colw[c] = std::max(colw[c], r[c].size());
  }

  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells, const std::string& label) {
    os << '|';
    for (std::size_t c = 0; c < w; ++c)
      os << ' ' << cells[c] << std::string(colw[c] - cells[c].size(), ' ') << " |";
    if (!label.empty())
      os << ' ' << label;
    os << '\n';
  };
  line(header, "");
  os << '|';
  for (std::size_t c = 0; c < w; ++c)
    os << std::string(colw[c] + 2, '-') << '|';
  os << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i)
    line(rows[i], labels[i]);
  return os.str();
}

} // namespace rgen
