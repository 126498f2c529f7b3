#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "dex/errors.hpp"
#include "dex/examples.hpp"
#include "dex/generate.hpp"
#include "dex/oracle.hpp"

using namespace dex;

namespace {

Bundle pair_of(const Economy& e, const std::string& a, const std::string& b) {
  Bundle x = Bundle::empty();
  x.add(e.object_index(a));
  x.add(e.object_index(b));
  return x;
}

}  // namespace

TEST_CASE("enumerate_allocations yields every allocation exactly once") {
  Economy e;
  e.objects = {"a"};
  e.agents = {"1"};
  e.endowments = {Bundle::single(0)};
  AdditiveUtility u;
  u.weights = {Rational(1)};
  e.utilities = {{u}};
  CHECK(enumerate_allocations(e).size() == 2);

  Economy e2;
  e2.objects = {"a", "b"};
  e2.agents = {"1", "2"};
  e2.endowments = {Bundle::single(0), Bundle::single(1)};
  AdditiveUtility u2;
  u2.weights = {Rational(1), Rational(2)};
  e2.utilities = {{u2}, {u2}};
  std::vector<Allocation> all = enumerate_allocations(e2);
  CHECK(all.size() == 9);
  std::sort(all.begin(), all.end(), [](const Allocation& a, const Allocation& b) {
    return std::make_pair(a.bundles[0].bits, a.bundles[1].bits) <
           std::make_pair(b.bundles[0].bits, b.bundles[1].bits);
  });
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());

  CHECK(enumerate_allocations(examples::ex2_economy()).size() == 4096);
}

TEST_CASE("enumeration budget refusal carries the count") {
  Economy e = examples::ex2_economy();
  try {
    enumerate_allocations(e, 100);
    FAIL("expected SizeRefusal");
  } catch (const SizeRefusal& r) {
    CHECK(r.estimate == doctest::Approx(4096));
  }
}

TEST_CASE("find_block certifies the Example 2 blocking cycle") {
  Economy e = examples::ex2_economy();

  auto block_x = find_block(e, examples::ex2_x(), true);
  REQUIRE(block_x.has_value());
  CHECK(block_x->coalition == 0b110);  // {2,3}
  CHECK(block_x->bundles.at(1) == pair_of(e, "l2", "r3"));
  CHECK(block_x->bundles.at(2) == pair_of(e, "l3", "r2"));

  auto block_y = find_block(e, examples::ex2_y(), true);
  REQUIRE(block_y.has_value());
  CHECK(block_y->coalition == 0b101);  // {1,3}
  CHECK(block_y->bundles.at(0) == pair_of(e, "l3", "r1"));
  CHECK(block_y->bundles.at(2) == pair_of(e, "l1", "r3"));

  auto block_z = find_block(e, examples::ex2_z(), true);
  REQUIRE(block_z.has_value());
  CHECK(block_z->coalition == 0b011);  // {1,2}
  CHECK(block_z->bundles.at(0) == pair_of(e, "l1", "r2"));
  CHECK(block_z->bundles.at(1) == pair_of(e, "l2", "r1"));
}

TEST_CASE("find_block on Example 1: Y weakly blocked by the grand coalition via X") {
  Economy e = examples::ex1_economy();
  auto block = find_block(e, examples::ex1_y(), false);
  REQUIRE(block.has_value());
  CHECK(block->coalition == 0b111);
  CHECK(block->bundles.at(0) == pair_of(e, "l2", "r3"));
  CHECK(block->bundles.at(1) == pair_of(e, "l3", "r1"));
  CHECK(block->bundles.at(2) == pair_of(e, "l1", "r2"));
  CHECK_FALSE(find_block(e, examples::ex1_y(), true).has_value());
}

TEST_CASE("a single agent holding everything at its peak is unblocked") {
  Economy e;
  e.objects = {"a", "b"};
  e.agents = {"1"};
  e.endowments = {Bundle::single(0) | Bundle::single(1)};
  AdditiveUtility u;
  u.weights = {Rational(1), Rational(2)};
  e.utilities = {{u}};
  Allocation top{{e.endowments[0]}};
  CHECK_FALSE(find_block(e, top, false).has_value());
}

TEST_CASE("Example 1 cores: strong core is exactly X, weak core holds X and Y") {
  Economy e = examples::ex1_economy();
  std::vector<Allocation> strong = strong_core(e);
  REQUIRE(strong.size() == 1);
  CHECK(strong.front() == examples::ex1_x());
  std::vector<Allocation> weak = weak_core(e);
  CHECK(std::count(weak.begin(), weak.end(), examples::ex1_x()) == 1);
  CHECK(std::count(weak.begin(), weak.end(), examples::ex1_y()) == 1);
}

TEST_CASE("Example 2 weak core is empty") {
  CHECK(weak_core(examples::ex2_economy()).empty());
  CHECK_FALSE(find_weak_core_allocation(examples::ex2_economy()).has_value());
}

TEST_CASE("strong core is contained in the weak core") {
  for (uint64_t seed = 1; seed <= 6; ++seed) {
    Economy e = generate_economy({"dichotomous", 3, 4, {}, seed});
    std::vector<Allocation> weak = weak_core(e), strong = strong_core(e);
    for (const Allocation& x : strong)
      CHECK(std::count(weak.begin(), weak.end(), x) == 1);
  }
}

TEST_CASE("weak core membership matches find_block with strong=true") {
  Economy e = generate_economy({"dichotomous", 3, 4, {}, 11});
  std::vector<Allocation> weak = weak_core(e);
  for_each_allocation(e, kDefaultBudget, [&](const Allocation& x) {
    bool in_core = std::count(weak.begin(), weak.end(), x) == 1;
    CHECK(in_core == !find_block(e, x, true).has_value());
  });
}

TEST_CASE("pairwise stable set") {
  SUBCASE("single agent: individual rationality only") {
    Economy e;
    e.objects = {"a", "b"};
    e.agents = {"1"};
    e.endowments = {Bundle::single(0) | Bundle::single(1)};
    AdditiveUtility u;
    u.weights = {Rational(1), Rational(2)};
    e.utilities = {{u}};
    std::vector<Allocation> stable = pairwise_stable_set(e);
    for (const Allocation& x : stable)
      CHECK(eval(e, 0, x.bundles[0]) >= eval(e, 0, e.endowments[0]));
    CHECK(stable.size() == 1);  // only the full endowment reaches the lone peak
  }
  SUBCASE("mutual-swap housing pair") {
    Economy e;
    e.objects = {"h1", "h2"};
    e.agents = {"1", "2"};
    e.endowments = {Bundle::single(0), Bundle::single(1)};
    e.utilities = {{HousingUtility{{1, 0}}}, {HousingUtility{{0, 1}}}};
    std::vector<Allocation> stable = pairwise_stable_set(e);
    REQUIRE(stable.size() == 1);
    CHECK(stable.front().bundles[0] == Bundle::single(1));
    CHECK(stable.front().bundles[1] == Bundle::single(0));
  }
  SUBCASE("members admit no pair block and are IR") {
    Economy e = examples::ex2_economy();
    for (const Allocation& x : pairwise_stable_set(e)) {
      CHECK(individually_rational(e, x));
      CHECK_FALSE(find_block(e, x, false, kDefaultBudget, 2).has_value());
    }
  }
}

TEST_CASE("pareto-table blocking agrees with the direct scan") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 8; ++trial) {
    const char* families[3] = {"dichotomous", "additive-free", "housing"};
    InstanceSpec spec{families[trial % 3], 3, 4, {}, rng()};
    if (spec.family == "housing") spec.objects = 0;
    Economy e = generate_economy(spec);
    CoalitionTable table(e);
    int checked = 0;
    for_each_allocation(e, kDefaultBudget, [&](const Allocation& x) {
      if (++checked % 7 != 0) return;  // sample
      UtilityProfile prof = profile_of(e, x);
      CHECK(strongly_blocked(table, prof) == find_block(e, x, true).has_value());
      CHECK(weakly_blocked(table, prof) == find_block(e, x, false).has_value());
    });
  }
}

namespace {

// Literal bargaining-set oracle: every objection enumerated directly, no
// Pareto reduction.
bool brute_bargaining(const Economy& e, const StructuredAllocation& xs) {
  UtilityProfile prof = profile_of(e, xs.allocation);
  std::vector<uint32_t> coalition_of(e.num_agents(), 0);
  for (uint32_t s : xs.structure)
    for (AgentId i : coalition_members(s)) coalition_of[i] = s;

  auto pair_allocations = [&](AgentId a, AgentId b) {
    std::vector<std::pair<Bundle, Bundle>> out;
    std::vector<ObjectId> pool = (e.endowments[a] | e.endowments[b]).members();
    std::function<void(size_t, Bundle, Bundle)> walk = [&](size_t t, Bundle xa, Bundle xb) {
      if (t == pool.size()) {
        out.emplace_back(xa, xb);
        return;
      }
      walk(t + 1, xa, xb);
      Bundle xa2 = xa;
      xa2.add(pool[t]);
      walk(t + 1, xa2, xb);
      Bundle xb2 = xb;
      xb2.add(pool[t]);
      walk(t + 1, xa, xb2);
    };
    walk(0, Bundle::empty(), Bundle::empty());
    return out;
  };

  for (AgentId i = 0; i < e.num_agents(); ++i) {
    for (AgentId j = i + 1; j < e.num_agents(); ++j) {
      for (const auto& [yi, yj] : pair_allocations(i, j)) {
        ExtValue vi = eval(e, i, yi), vj = eval(e, j, yj);
        bool objection = vi >= prof[i] && vj >= prof[j] &&
                         (prof[i] < vi || prof[j] < vj);
        if (!objection) continue;
        Allocation derived;
        derived.bundles.assign(e.num_agents(), Bundle::empty());
        uint32_t objectors = (uint32_t(1) << i) | (uint32_t(1) << j);
        for (AgentId h = 0; h < e.num_agents(); ++h) {
          if (h == i) derived.bundles[h] = yi;
          else if (h == j) derived.bundles[h] = yj;
          else if (coalition_of[h] & objectors) derived.bundles[h] = e.endowments[h];
          else derived.bundles[h] = xs.allocation.bundles[h];
        }
        UtilityProfile dprof = profile_of(e, derived);
        bool countered = false;
        for (AgentId a = 0; a < e.num_agents() && !countered; ++a)
          for (AgentId b = a + 1; b < e.num_agents() && !countered; ++b) {
            uint32_t counter = (uint32_t(1) << a) | (uint32_t(1) << b);
            if (__builtin_popcount(counter & objectors) != 1) continue;
            for (const auto& [za, zb] : pair_allocations(a, b)) {
              ExtValue va = eval(e, a, za), vb = eval(e, b, zb);
              if (va >= dprof[a] && vb >= dprof[b] && (dprof[a] < va || dprof[b] < vb)) {
                countered = true;
                break;
              }
            }
          }
        if (!countered) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("bargaining oracle agrees with the literal objection scan") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    const char* families[3] = {"additive-free", "dichotomous", "housing"};
    InstanceSpec spec{families[trial % 3], 3, 4, {}, rng()};
    if (spec.family == "housing") spec.objects = 0;
    Economy e = generate_economy(spec);
    // singleton structure over the endowment allocation plus a sampled
    // structured trade between agents 0 and 1
    StructuredAllocation endow{{e.endowments}, {0b001, 0b010, 0b100}};
    CHECK(pairwise_bargaining_set(e, endow).in_set == brute_bargaining(e, endow));

    Bundle pool = e.endowments[0] | e.endowments[1];
    std::vector<ObjectId> objs = pool.members();
    Bundle x0 = Bundle::empty();
    for (ObjectId o : objs)
      if (rng() & 1) x0.add(o);
    StructuredAllocation traded{{{x0, pool.minus(x0), e.endowments[2]}}, {0b011, 0b100}};
    CHECK(pairwise_bargaining_set(e, traded).in_set == brute_bargaining(e, traded));
  }
}

TEST_CASE("bargaining set oracle") {
  SUBCASE("no objection means membership") {
    Economy e;
    e.objects = {"a", "b"};
    e.agents = {"1", "2"};
    e.endowments = {Bundle::single(0), Bundle::single(1)};
    AdditiveUtility u;
    u.weights = {Rational(1), Rational(2)};
    e.utilities = {{u}, {u}};
    StructuredAllocation xs{{{Bundle::single(0), Bundle::single(1)}}, {0b01, 0b10}};
    BargainingResult r = pairwise_bargaining_set(e, xs);
    CHECK(r.in_set);
    CHECK_FALSE(r.unanswered.has_value());
  }
  SUBCASE("Example 2 allocation X under structure {{1,2},{3}} survives objections") {
    Economy e = examples::ex2_economy();
    StructuredAllocation xs{examples::ex2_x(), {0b011, 0b100}};
    BargainingResult r = pairwise_bargaining_set(e, xs);
    CHECK(r.in_set);  // the {2,3} objection is countered by {1,3}
  }
  SUBCASE("structure is required to be a partition with coalition-local bundles") {
    Economy e = examples::ex2_economy();
    StructuredAllocation bad{examples::ex2_x(), {0b011}};
    CHECK_THROWS_AS(pairwise_bargaining_set(e, bad), InputError);
    StructuredAllocation outside{examples::ex2_x(), {0b001, 0b010, 0b100}};
    // agent 1 holds r2 which sits outside their singleton coalition
    CHECK_THROWS_AS(pairwise_bargaining_set(e, outside), InputError);
  }
}
