#include "rgen/csa.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace rgen;

namespace {

std::string golden(const std::string& name)
{
  std::ifstream in(std::string(RGEN_GOLDEN_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Reduced {
  NetlistBuilder builder;
  PoolBuild pool;
  ReduceResult red;
};

Reduced reduce_fresh(unsigned p, const Modulus& m, EacPolicy policy, std::size_t target = 2)
{
  auto pb = build_pool(p, m);
  ReduceResult red = reduce(pb.builder, pb.build.pool, target, policy);
  return {std::move(pb.builder), std::move(pb.build), std::move(red)};
}

EacPolicy policy_for(const Modulus& m)
{
  return m.kind() == ModulusKind::FermatLike ? EacPolicy::Inverted : EacPolicy::Plain;
}

std::vector<int> wires_of(const std::vector<Signal>& v)
{
  std::vector<int> w;
  for (const Signal& s : v)
    w.push_back(s.inverted ? -static_cast<int>(s.wire) - 1 : static_cast<int>(s.wire));
  return w;
}

} // namespace

TEST_CASE("partition_blocks")
{
  auto b = partition_blocks(18, 3);
  CHECK(b.size() == 6);
  CHECK(b.back().padding == 0);

  b = partition_blocks(16, 3);
  CHECK(b.size() == 6);
  CHECK(b.back().live == 1);
  CHECK(b.back().padding == 2);

  b = partition_blocks(7, 7);
  CHECK(b.size() == 1);
  CHECK(b[0].padding == 0);

  // 2n-wide blocks pad to q*2n - p
  b = partition_blocks(19, 6);
  CHECK(b.size() == 4);
  CHECK(b.back().padding == 4 * 6 - 19);

  CHECK_THROWS_AS(partition_blocks(0, 3), ParameterError);
}

TEST_CASE("build_pool for 2^n+1 complements odd blocks")
{
  auto pb = build_pool(18, Modulus::fermat(3));
  const BitPool& pool = pb.build.pool;
  // G_0 = {x0, ~x3, x6, ~x9, x12, ~x15}; inputs are wires 0..17
  CHECK(wires_of(pool[0]) == std::vector<int>{0, -4, 6, -10, 12, -16});
  CHECK(wires_of(pool[1]) == std::vector<int>{1, -5, 7, -11, 13, -17});
  CHECK(wires_of(pool[2]) == std::vector<int>{2, -6, 8, -12, 14, -18});
  const auto& e = pb.build.ledger.entries();
  REQUIRE(e.size() == 3);
  CHECK(e[0].label == "B1");
  CHECK(e[0].amount == -7);
  CHECK(e[1].amount == -7);
  CHECK(e[2].amount == -7);

  pb = build_pool(16, Modulus::fermat(3));
  CHECK(pb.build.pool.counts() == std::vector<std::size_t>{6, 5, 5});
  const auto& e16 = pb.build.ledger.entries();
  REQUIRE(e16.size() == 3);
  CHECK(e16[0].amount == -7);
  CHECK(e16[1].amount == -7);
  CHECK(e16[2].amount == -1);
}

TEST_CASE("build_pool for 2^n-1 has no inversions")
{
  auto pb = build_pool(6, Modulus::mersenne(3));
  for (std::size_t k = 0; k < 3; ++k)
    CHECK(wires_of(pb.build.pool[k]) ==
          std::vector<int>{static_cast<int>(k), static_cast<int>(k + 3)});
  CHECK(pb.build.ledger.accumulated() == 0);
  CHECK(pb.build.ledger.entries().empty());
}

TEST_CASE("reduce reproduces the mod-9 stage tables")
{
  SUBCASE("p = 18")
  {
    auto r = reduce_fresh(18, Modulus::fermat(3), EacPolicy::Inverted);
    const auto& st = r.red.table.stages;
    REQUIRE(st.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(st[0].allocation[k] == Allocation{2, 0});
      CHECK(st[1].allocation[k] == Allocation{1, 0});
      CHECK(st[2].allocation[k] == Allocation{1, 0});
    }
    const auto& d = r.red.delta.entries();
    REQUIRE(d.size() == 3);
    CHECK(d[0].amount == -2);
    CHECK(d[1].amount == -1);
    CHECK(d[2].amount == -1);
    CHECK(r.red.delta.accumulated() == 5); // |-4|_9
    CHECK(r.red.table.full_adders() == 12);
  }
  SUBCASE("p = 16")
  {
    auto r = reduce_fresh(16, Modulus::fermat(3), EacPolicy::Inverted);
    const auto& st = r.red.table.stages;
    REQUIRE(st.size() == 3);
    CHECK(st[0].allocation[2] == Allocation{1, 1});
    CHECK(st[0].allocation[1] == Allocation{1, 1});
    CHECK(st[0].allocation[0] == Allocation{2, 0});
    CHECK(r.red.table.full_adders() == 10);
    CHECK(r.red.table.half_adders() == 2);
  }
  SUBCASE("p = 17")
  {
    auto r = reduce_fresh(17, Modulus::fermat(3), EacPolicy::Inverted);
    const auto& st = r.red.table.stages;
    REQUIRE(st.size() == 3);
    CHECK(st[0].allocation[2] == Allocation{1, 1});
    CHECK(st[0].allocation[1] == Allocation{2, 0});
    CHECK(st[0].allocation[0] == Allocation{2, 0});
  }
  SUBCASE("already reduced pool")
  {
    for (auto policy : {EacPolicy::Plain, EacPolicy::None}) {
      auto r = reduce_fresh(6, Modulus::mersenne(3), policy);
      CHECK(r.red.table.stages.empty());
      CHECK(r.red.delta.accumulated() == 0);
      CHECK(r.builder.gates().empty());
    }
    auto r = reduce_fresh(6, Modulus::fermat(3), EacPolicy::Inverted);
    CHECK(r.red.table.stages.empty());
  }
}

TEST_CASE("reduce rejects impossible targets and mismatched policies")
{
  auto pb = build_pool(12, Modulus::fermat(3));
  CHECK_THROWS_AS(reduce(pb.builder, pb.build.pool, 1, EacPolicy::Inverted), ScheduleError);
  CHECK_THROWS_AS(reduce(pb.builder, pb.build.pool, 2, EacPolicy::Plain), ScheduleError);
  auto pm = build_pool(12, Modulus::mersenne(3));
  CHECK_THROWS_AS(reduce(pm.builder, pm.build.pool, 2, EacPolicy::Inverted), ScheduleError);
}

TEST_CASE("total correction reproduces the mod-9 table")
{
  for (auto [p, want, raw] : {std::tuple{16u, 8u, -19}, {17u, 6u, -21}, {18u, 2u, -25}}) {
    auto r = reduce_fresh(p, Modulus::fermat(3), EacPolicy::Inverted);
    CorrectionLedger total = r.pool.ledger;
    total.merge(r.red.delta);
    CHECK(total.raw_total() == raw);
    CHECK(total.accumulated() == want);
  }
}

TEST_CASE("render_shorthand matches the golden stage tables")
{
  for (unsigned p : {16u, 17u, 18u}) {
    auto r = reduce_fresh(p, Modulus::fermat(3), EacPolicy::Inverted);
    CHECK(render_shorthand(r.red.table) ==
          golden("fig1_p" + std::to_string(p) + "_m9.txt"));
  }
  ShorthandTable empty;
  empty.width = 3;
  CHECK(render_shorthand(empty) == "| G2 | G1 | G0 |\n|----|----|----|\n");
}

TEST_CASE("reduction preserves the residue (exhaustive)")
{
  for (unsigned n : {2u, 3u}) {
    for (const Modulus& m : {Modulus::mersenne(n), Modulus::fermat(n), Modulus::double_mersenne(n)}) {
      const unsigned pmax = n == 2 ? 16 : 18;
      for (unsigned p = 1; p <= pmax; ++p) {
        auto r = reduce_fresh(p, m, policy_for(m));
        CorrectionLedger total = r.pool.ledger;
        total.merge(r.red.delta);
        r.builder.add_output({"pool", r.red.pool.as_plain(total.accumulated())});
        const Netlist nl = r.builder.build({});
        PackedSimulator sim(nl);
        std::vector<std::uint64_t> xs;
        for (std::uint64_t first = 0; first < (std::uint64_t{1} << p); first += 64) {
          xs.clear();
          for (std::uint64_t x = first; x < std::min(first + 64, std::uint64_t{1} << p); ++x)
            xs.push_back(x);
          sim.run(pack_inputs(xs, p));
          for (unsigned lane = 0; lane < xs.size(); ++lane) {
            const std::uint64_t v = (sim.plain_value(0, lane) + total.accumulated()) % m.value();
            REQUIRE_MESSAGE(v == xs[lane] % m.value(), m.to_string() << " p=" << p);
          }
        }
        CHECK(r.red.pool.max_count() <= 2);
        CHECK(r.red.table.consistent(policy_for(m)));
      }
    }
  }
}

TEST_CASE("FA-count law for plain EAC without half adders")
{
  for (unsigned n = 2; n <= 6; ++n)
    for (unsigned blocks = 2; blocks <= 9; ++blocks) {
      const Modulus m = Modulus::double_mersenne(n);
      const unsigned p = blocks * 2 * n;
      auto r = reduce_fresh(p, m, EacPolicy::Plain);
      REQUIRE(r.red.table.half_adders() == 0);
      CHECK(r.red.table.full_adders() == p - r.red.pool.total_bits());
      CHECK(r.red.pool.total_bits() == 4 * n);
    }
}

TEST_CASE("policy None grows the pool instead of wrapping")
{
  auto pb = build_pool(12, Modulus::mersenne(3));
  ReduceResult r = reduce(pb.builder, pb.build.pool, 2, EacPolicy::None);
  CHECK(r.pool.width() > 3);
  CHECK(r.table.consistent(EacPolicy::None));
  // Without wrap the pool holds the plain integer sum.
  pb.builder.add_output({"pool", r.pool.as_plain()});
  const Netlist nl = pb.builder.build({});
  for (std::uint64_t x = 0; x < 4096; x += 13)
    REQUIRE(evaluate(nl, x)[0].value % 7 == x % 7);
}

TEST_CASE("table consistency invariant detects tampering")
{
  auto r = reduce_fresh(16, Modulus::fermat(3), EacPolicy::Inverted);
  ShorthandTable t = r.red.table;
  CHECK(t.consistent(EacPolicy::Inverted));
  t.stages[1].entering[0] += 1;
  CHECK_FALSE(t.consistent(EacPolicy::Inverted));
}
