#include "rgen/verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <thread>

namespace rgen {

std::uint64_t exhaustive_budget()
{
  if (const char* env = std::getenv(kBudgetEnvVar)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0)
      return v;
  }
  return kDefaultExhaustiveBudget;
}

namespace {

// Checks lane `lane` of a simulated batch against the oracle for input x.
class OracleCheck {
public:
  OracleCheck(const Netlist& nl, const GeneratorSpec& spec)
      : spec_(spec), mersenne_(Modulus::mersenne(spec.n)), fermat_(Modulus::fermat(spec.n))
  {
    switch (spec.family) {
    case Family::ClassicMersenne:
      plain_port_ = nl.output_index("r");
      break;
    case Family::ClassicFermat:
      plain_port_ = nl.output_index("r");
      break;
    case Family::UniversalD1:
      d1_port_ = nl.output_index("x");
      break;
    case Family::BiResidue:
      plain_port_ = nl.output_index("r");
      d1_port_ = nl.output_index("x");
      break;
    }
  }

  std::optional<std::string> operator()(const PackedSimulator& sim, unsigned lane,
                                        std::uint64_t x) const
  {
    if (plain_port_) {
      const Modulus& m = spec_.family == Family::ClassicFermat ? fermat_ : mersenne_;
      const std::uint64_t want = oracle_residue(x, m);
      const std::uint64_t got = sim.plain_value(*plain_port_, lane);
      if (got != want)
        return "port r: expected " + std::to_string(want) + ", got " + std::to_string(got);
    }
    if (d1_port_) {
      const D1Value want = d1_encode(oracle_residue(x, fermat_), spec_.n);
      const D1Value got = sim.d1_value(*d1_port_, lane);
      if (!(got == want))
        return "port x: expected " + to_string(want, spec_.n) + ", got " + to_string(got, spec_.n);
    }
    return std::nullopt;
  }

private:
  GeneratorSpec spec_;
  Modulus mersenne_;
  Modulus fermat_;
  std::optional<std::size_t> plain_port_;
  std::optional<std::size_t> d1_port_;
};

struct Failure {
  std::uint64_t x = std::numeric_limits<std::uint64_t>::max();
  std::string detail;
  bool found = false;
};

void record(Failure& f, std::uint64_t x, std::string detail)
{
  if (!f.found || x < f.x) {
    f.x = x;
    f.detail = std::move(detail);
    f.found = true;
  }
}

unsigned worker_count(unsigned requested, std::uint64_t work)
{
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  const std::uint64_t batches = (work + 63) / 64;
  return static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(t, batches)));
}

// Runs `check(sim, lane, x)` over xs produced by `input(i)` for i in [0, count).
template <class InputFn>
Verdict sweep(const Netlist& nl, const OracleCheck& check, std::uint64_t count, unsigned threads,
              InputFn input)
{
  const unsigned p = static_cast<unsigned>(nl.inputs().size());
  const unsigned workers = worker_count(threads, count);
  const std::uint64_t batches = (count + 63) / 64;
  std::vector<Failure> failures(workers);

  auto work = [&](unsigned w) {
    PackedSimulator sim(nl);
    std::vector<std::uint64_t> xs;
    for (std::uint64_t batch = w; batch < batches; batch += workers) {
      const std::uint64_t first = batch * 64;
      const std::uint64_t last = std::min(count, first + 64);
      xs.clear();
      for (std::uint64_t i = first; i < last; ++i)
        xs.push_back(input(i));
      sim.run(pack_inputs(xs, p));
      for (unsigned lane = 0; lane < xs.size(); ++lane)
        if (auto bad = check(sim, lane, xs[lane]))
          record(failures[w], xs[lane], std::move(*bad));
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work, w);
    for (auto& t : pool)
      t.join();
  }

  Failure merged;
  for (auto& f : failures)
    if (f.found)
      record(merged, f.x, f.detail);

  Verdict v;
  v.evaluated = count;
  v.pass = !merged.found;
  if (merged.found) {
    v.counterexample = merged.x;
    v.detail = "X=" + std::to_string(merged.x) + ": " + merged.detail;
  }
  return v;
}

} // namespace

std::vector<std::uint64_t> random_samples(std::uint64_t count, std::uint64_t seed, unsigned p)
{
  std::mt19937_64 rng(seed);
  const std::uint64_t mask = p >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p) - 1;
  std::vector<std::uint64_t> xs(count);
  for (auto& x : xs)
    x = rng() & mask;
  return xs;
}

Verdict run_sweep(const Netlist& nl, const SweepPlan& plan)
{
  const unsigned p = static_cast<unsigned>(nl.inputs().size());
  if (p == 0 || p > 64)
    throw ParameterError("sweeps support 1 <= p <= 64 inputs");
  OracleCheck check(nl, plan.spec);

  if (plan.mode == SweepMode::Exhaustive) {
    if (p >= 63 || (std::uint64_t{1} << p) > plan.budget)
      throw BudgetExceeded("exhaustive sweep of 2^" + std::to_string(p) +
                           " inputs exceeds the budget of " + std::to_string(plan.budget));
    Verdict v = sweep(nl, check, std::uint64_t{1} << p, plan.threads,
                      [](std::uint64_t i) { return i; });
    v.sampler = "exhaustive";
    return v;
  }
  const auto xs = random_samples(plan.samples, plan.seed, p);
  Verdict v = sweep(nl, check, xs.size(), plan.threads, [&](std::uint64_t i) { return xs[i]; });
  v.sampler = kRandomEngine;
  return v;
}

Verdict run_sweep(const SweepPlan& plan)
{
  validate(plan.spec);
  if (plan.spec.p > 64)
    throw ParameterError("sweeps support p <= 64");
  if (plan.mode == SweepMode::Exhaustive &&
      (plan.spec.p >= 63 || (std::uint64_t{1} << plan.spec.p) > plan.budget))
    throw BudgetExceeded("exhaustive sweep of 2^" + std::to_string(plan.spec.p) +
                         " inputs exceeds the budget of " + std::to_string(plan.budget));
  return run_sweep(build(plan.spec).netlist, plan);
}

std::optional<std::string> check_input(const Netlist& nl, const GeneratorSpec& spec,
                                       std::uint64_t x)
{
  OracleCheck check(nl, spec);
  PackedSimulator sim(nl);
  const std::uint64_t one[] = {x};
  sim.run(pack_inputs(one, static_cast<unsigned>(nl.inputs().size())));
  return check(sim, 0, x);
}

// ---------------------------------------------------------------------------

Verdict check_property1(unsigned n)
{
  if (n < 2 || n > 6)
    throw ParameterError("check_property1: exhaustive triples need 2 <= n <= 6");
  const Netlist nl = csa_stage_ferm_netlist(n);
  const std::uint64_t m = Modulus::fermat(n).value();
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  const std::size_t c_port = nl.output_index("c"), s_port = nl.output_index("s");

  PackedSimulator sim(nl);
  Verdict v;
  v.sampler = "exhaustive";
  const std::uint64_t total = std::uint64_t{1} << (3 * n);
  std::vector<std::uint64_t> xs;
  for (std::uint64_t first = 0; first < total && v.pass; first += 64) {
    xs.clear();
    for (std::uint64_t t = first; t < std::min(total, first + 64); ++t)
      xs.push_back(t);
    sim.run(pack_inputs(xs, 3 * n));
    for (unsigned lane = 0; lane < xs.size(); ++lane) {
      const std::uint64_t t = xs[lane];
      const std::uint64_t x = t & mask, y = (t >> n) & mask, z = (t >> 2 * n) & mask;
      const std::uint64_t lhs = (x + y + z) % m;
      const std::uint64_t rhs = (sim.plain_value(c_port, lane) + sim.plain_value(s_port, lane) +
                                 m - 1) % m;
      if (lhs != rhs) {
        v.pass = false;
        v.counterexample = t;
        v.detail = "x=" + std::to_string(x) + " y=" + std::to_string(y) + " z=" +
                   std::to_string(z) + ": |x+y+z|=" + std::to_string(lhs) +
                   " but |c+s-1|=" + std::to_string(rhs);
        break;
      }
    }
    v.evaluated += xs.size();
  }
  return v;
}

Verdict check_property2(unsigned n)
{
  if (n < 2 || n > 10)
    throw ParameterError("check_property2: exhaustive pairs need 2 <= n <= 10");
  const Netlist nl = final_adder_ferm_d1_netlist(n);
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  const std::size_t port = nl.output_index("x");

  PackedSimulator sim(nl);
  Verdict v;
  v.sampler = "exhaustive";
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  std::vector<std::uint64_t> xs;
  for (std::uint64_t first = 0; first < total && v.pass; first += 64) {
    xs.clear();
    for (std::uint64_t t = first; t < std::min(total, first + 64); ++t)
      xs.push_back(t);
    sim.run(pack_inputs(xs, 2 * n));
    for (unsigned lane = 0; lane < xs.size(); ++lane) {
      const std::uint64_t a = xs[lane] & mask, b = (xs[lane] >> n) & mask;
      const D1Value want = final_adder_ferm_d1_reference(a, b, n);
      const D1Value got = sim.d1_value(port, lane);
      if (!(got == want)) {
        v.pass = false;
        v.counterexample = xs[lane];
        v.detail = "a=" + std::to_string(a) + " b=" + std::to_string(b) + ": expected " +
                   to_string(want, n) + ", got " + to_string(got, n);
        break;
      }
    }
    v.evaluated += xs.size();
  }
  return v;
}

Verdict check_nesting_identity(unsigned n, unsigned p)
{
  if (p == 0 || p > 32)
    throw ParameterError("check_nesting_identity: 1 <= p <= 32");
  const Modulus outer = Modulus::double_mersenne(n);
  const Modulus lo = Modulus::mersenne(n), hi = Modulus::fermat(n);
  Verdict v;
  v.sampler = "exhaustive";
  std::vector<std::uint8_t> bits(p);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << p); ++x) {
    for (unsigned i = 0; i < p; ++i)
      bits[i] = (x >> i) & 1;
    const std::uint64_t wide = oracle_residue(bits, outer);
    for (const Modulus& m : {lo, hi}) {
      if (oracle_residue(bits, m) != oracle_residue(wide, m)) {
        v.pass = false;
        v.counterexample = x;
        v.detail = "X=" + std::to_string(x) + " mod " + m.to_string();
        return v;
      }
    }
    ++v.evaluated;
  }
  return v;
}

Verdict check_goldens(const std::filesystem::path& golden_dir)
{
  auto slurp = [&](const std::string& name) {
    const auto path = golden_dir / name;
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw std::runtime_error("missing golden file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };

  Verdict v;
  v.sampler = "golden";
  std::istringstream cor_lines(slurp("table1_m9.txt"));
  std::string line;
  while (std::getline(cor_lines, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream fields(line);
    unsigned p = 0;
    std::uint64_t want = 0;
    fields >> p >> want;
    const Generated g = build_classic_fermat(p, 3);
    ++v.evaluated;
    if (g.report.cor != want) {
      v.pass = false;
      v.counterexample = p;
      v.detail = "COR(" + std::to_string(p) + ", 9) = " + std::to_string(g.report.cor) +
                 ", golden " + std::to_string(want);
      return v;
    }
  }
  for (unsigned p : {16u, 17u, 18u}) {
    const std::string want = slurp("fig1_p" + std::to_string(p) + "_m9.txt");
    const std::string got = render_shorthand(build_classic_fermat(p, 3).report.tables.at(0).table);
    ++v.evaluated;
    if (got != want) {
      v.pass = false;
      v.counterexample = p;
      v.detail = "shorthand table for p=" + std::to_string(p) + " differs:\n" + got;
      return v;
    }
  }
  return v;
}

} // namespace rgen
