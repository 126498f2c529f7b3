#include <doctest.h>

#include <random>

#include "dex/checks.hpp"
#include "dex/errors.hpp"
#include "dex/examples.hpp"
#include "dex/generate.hpp"
#include "dex/toperator.hpp"

using namespace dex;

namespace {

Economy additive_pair() {
  Economy e;
  e.objects = {"a", "b"};
  e.agents = {"1", "2"};
  e.endowments = {Bundle::single(0), Bundle::single(1)};
  AdditiveUtility u;
  u.weights = {Rational(1), Rational(2)};
  e.utilities = {{u}, {u}};
  return e;
}

Economy rotation_market() {
  // 1 tops h2, 2 tops h3, 3 tops h1
  Economy e;
  e.objects = {"h1", "h2", "h3"};
  e.agents = {"1", "2", "3"};
  for (int i = 0; i < 3; ++i) e.endowments.push_back(Bundle::single(i));
  e.utilities.push_back({HousingUtility{{1, 0, 2}}});
  e.utilities.push_back({HousingUtility{{2, 1, 0}}});
  e.utilities.push_back({HousingUtility{{0, 2, 1}}});
  return e;
}

UtilityProfile profile(std::initializer_list<long long> vals) {
  UtilityProfile u;
  for (long long v : vals) u.push_back(ExtValue(Rational(v)));
  return u;
}

}  // namespace

TEST_CASE("b_set") {
  SUBCASE("k = 1 keeps only own-endowment trades") {
    Economy e = additive_pair();
    TContext ctx(e, 1);
    auto b = b_set(ctx, 0, ctx.endowment_profile());
    CHECK(b == std::set<ExtValue>{ExtValue(Rational(0)), ExtValue(Rational(1))});
    CHECK(b.count(ExtValue(Rational(1))));  // own endowment value
  }
  SUBCASE("a partner held at their endowment value blocks the good object") {
    Economy e = additive_pair();
    TContext ctx(e, 2);
    auto b = b_set(ctx, 0, profile({1, 2}));
    CHECK(b == std::set<ExtValue>{ExtValue(Rational(0)), ExtValue(Rational(1))});
  }
  SUBCASE("the housing rotation is reachable for full-size coalitions") {
    Economy e = rotation_market();
    TContext ctx(e, 3);
    auto b = b_set(ctx, 0, ctx.endowment_profile());
    CHECK(b.count(eval(e, 0, Bundle::single(1))));  // agent 1 can reach h2
  }
}

TEST_CASE("apply_T") {
  SUBCASE("at the top profile everyone falls back to their own pool") {
    Economy e = additive_pair();
    TContext ctx(e, 2);
    UtilityProfile top = profile({3, 3});
    UtilityProfile t = apply_T(ctx, top);
    CHECK(t == profile({1, 2}));
  }
  SUBCASE("housing rotation lifts everyone to their top at the floor profile") {
    Economy e = rotation_market();
    TContext ctx(e, 3);
    UtilityProfile t = apply_T(ctx, ctx.endowment_profile());
    CHECK(t[0] == eval(e, 0, Bundle::single(1)));
    CHECK(t[1] == eval(e, 1, Bundle::single(2)));
    CHECK(t[2] == eval(e, 2, Bundle::single(0)));
  }
  SUBCASE("apply_T equals the maximum of b_set coordinatewise") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 12; ++trial) {
      const char* families[2] = {"additive-free", "housing"};
      InstanceSpec spec{families[trial % 2], 3, 4, {}, rng()};
      if (spec.family == "housing") spec.objects = 0;
      Economy e = generate_economy(spec);
      TContext ctx(e, 2 + int(trial % 2));
      UtilityProfile u;
      for (AgentId i = 0; i < e.num_agents(); ++i) {
        const auto& ach = ctx.achievable(i);
        u.push_back(ExtValue(ach[rng() % ach.size()]));
      }
      UtilityProfile t = apply_T(ctx, u);
      for (AgentId i = 0; i < e.num_agents(); ++i) {
        auto b = b_set(ctx, i, u);
        REQUIRE_FALSE(b.empty());
        CHECK(t[i] == *b.rbegin());
        CHECK(b.count(eval(e, i, e.endowments[i])) == 1);
      }
    }
  }
  SUBCASE("T is antitone on sampled profile pairs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      Economy e = generate_economy({"additive-free", 3, 4, {}, rng()});
      TContext ctx(e, 2);
      UtilityProfile lo, hi;
      for (AgentId i = 0; i < 3; ++i) {
        const auto& ach = ctx.achievable(i);
        size_t x = rng() % ach.size(), y = rng() % ach.size();
        lo.push_back(ExtValue(ach[std::min(x, y)]));
        hi.push_back(ExtValue(ach[std::max(x, y)]));
      }
      UtilityProfile t_lo = apply_T(ctx, lo), t_hi = apply_T(ctx, hi);
      for (AgentId i = 0; i < 3; ++i) CHECK(t_hi[i] <= t_lo[i]);
    }
  }
}

TEST_CASE("iterate_to_fixed_point") {
  SUBCASE("the additive pair is fixed immediately") {
    Economy e = additive_pair();
    TContext ctx(e, 2);
    TTrace trace = iterate_to_fixed_point(ctx);
    CHECK(trace.fixed_point == profile({1, 2}));
    CHECK(apply_T(ctx, trace.fixed_point) == trace.fixed_point);
  }
  SUBCASE("the housing fixed point matches the TTC utilities") {
    Economy e = rotation_market();
    TContext ctx(e, 3);
    TTrace trace = iterate_to_fixed_point(ctx);
    TTCResult ttc = run_ttc(housing_market(e));
    for (AgentId i = 0; i < 3; ++i)
      CHECK(trace.fixed_point[i] == eval(e, i, Bundle::single(ttc.assignment[i])));
  }
  SUBCASE("the sandwich chain holds along the trace") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      Economy e = generate_economy({"housing", 4, 0, {}, rng()});
      TContext ctx(e, 4);
      TTrace trace = iterate_to_fixed_point(ctx);
      const auto& it = trace.iterates;
      size_t count = it.size() - 1;
      long long bound = 1;
      for (AgentId i = 0; i < 4; ++i) bound *= (long long)ctx.achievable(i).size();
      CHECK((long long)count <= bound);
      for (size_t m = 0; m + 2 < it.size(); m += 2)
        for (AgentId i = 0; i < 4; ++i) CHECK(it[m][i] <= it[m + 2][i]);
      for (size_t m = 1; m + 2 < it.size(); m += 2)
        for (AgentId i = 0; i < 4; ++i) CHECK(it[m + 2][i] <= it[m][i]);
      for (size_t even = 0; even < it.size(); even += 2)
        for (size_t odd = 1; odd < it.size(); odd += 2)
          for (AgentId i = 0; i < 4; ++i) CHECK(it[even][i] <= it[odd][i]);
    }
  }
}

TEST_CASE("classify_and_pair") {
  SUBCASE("a T-fixed point has no A2 agents") {
    Economy e = additive_pair();
    TContext ctx(e, 2);
    CyclePairing cp = classify_and_pair(ctx, iterate_to_fixed_point(ctx).fixed_point);
    CHECK(cp.a1 == std::vector<AgentId>{0, 1});
    CHECK(cp.a2.empty());
    CHECK(cp.pairs.empty());
  }
  SUBCASE("the paired-consumption economy pairs both agents") {
    Economy e = examples::dtu_pair_economy();
    REQUIRE(check_discrete_TU(e).ok);
    TContext ctx(e, 2);
    TTrace trace = iterate_to_fixed_point(ctx);
    CHECK(trace.fixed_point == profile({19, 19}));
    CyclePairing cp = classify_and_pair(ctx, trace.fixed_point);
    CHECK(cp.tu == profile({20, 20}));
    CHECK(cp.a1.empty());
    CHECK(cp.a2 == std::vector<AgentId>{0, 1});
    REQUIRE(cp.pairs.size() == 1);
    CHECK(cp.pairs[0] == std::pair<AgentId, AgentId>{0, 1});
  }
  SUBCASE("common-weight additive economies never leave the floor") {
    // pairwise trades conserve total weight, so Tu = u for every u at or
    // above the endowment profile and A2 is always empty
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
      Economy e = generate_economy({"additive-common", 3, 5, {}, rng()});
      TContext ctx(e, 2);
      TTrace trace = iterate_to_fixed_point(ctx);
      CHECK(trace.fixed_point == ctx.endowment_profile());
      CyclePairing cp = classify_and_pair(ctx, trace.fixed_point);
      CHECK(cp.a2.empty());
    }
  }
  SUBCASE("rejects profiles that are not T^2-fixed") {
    Economy e = examples::dtu_pair_economy();
    TContext ctx(e, 2);
    CHECK_THROWS_AS(classify_and_pair(ctx, profile({20, 20})), InputError);
  }
  SUBCASE("without discrete TU a long trading cycle is reported") {
    // found by seeded search over agent-specific weight vectors
    Economy e = generate_economy({"additive-free", 3, 5, {}, 14});
    REQUIRE_FALSE(check_discrete_TU(e).ok);
    TContext ctx(e, 2);
    TTrace trace = iterate_to_fixed_point(ctx);
    try {
      classify_and_pair(ctx, trace.fixed_point);
      FAIL("expected an InvariantError for a cycle longer than two");
    } catch (const InvariantError& err) {
      CHECK(std::string(err.what()).find("cycle of length 3") != std::string::npos);
    }
  }
}

TEST_CASE("construct_bargaining_allocation") {
  SUBCASE("the paired-consumption two-cycle trades the pool") {
    Economy e = examples::dtu_pair_economy();
    TContext ctx(e, 2);
    CyclePairing cp = classify_and_pair(ctx, iterate_to_fixed_point(ctx).fixed_point);
    StructuredAllocation xs = construct_bargaining_allocation(ctx, cp);
    Bundle ad = Bundle::single(0) | Bundle::single(3);
    Bundle bc = Bundle::single(1) | Bundle::single(2);
    CHECK(xs.allocation.bundles[0] == ad);
    CHECK(xs.allocation.bundles[1] == bc);
    CHECK(xs.structure == std::vector<uint32_t>{0b11});
    CHECK(individually_rational(e, xs.allocation));
    CHECK(pairwise_bargaining_set(e, xs).in_set);
  }
  SUBCASE("with empty A2 the endowment allocation comes back") {
    Economy e = generate_economy({"additive-common", 3, 5, {}, 3});
    TContext ctx(e, 2);
    CyclePairing cp = classify_and_pair(ctx, iterate_to_fixed_point(ctx).fixed_point);
    StructuredAllocation xs = construct_bargaining_allocation(ctx, cp);
    for (AgentId i = 0; i < e.num_agents(); ++i)
      CHECK(xs.allocation.bundles[i] == e.endowments[i]);
    CHECK(xs.structure.size() == size_t(e.num_agents()));
    CHECK(pairwise_bargaining_set(e, xs).in_set);
  }
  SUBCASE("a mutual-swap housing market lands on the TTC cycle with its structure") {
    Economy e;
    e.objects = {"h1", "h2"};
    e.agents = {"1", "2"};
    e.endowments = {Bundle::single(0), Bundle::single(1)};
    e.utilities = {{HousingUtility{{1, 0}}}, {HousingUtility{{0, 1}}}};
    TContext ctx(e, 2);
    CyclePairing cp = classify_and_pair(ctx, iterate_to_fixed_point(ctx).fixed_point);
    CHECK(cp.a2.empty());  // the swap is jointly realizable, so T fixes it
    StructuredAllocation xs = construct_bargaining_allocation(ctx, cp);
    TTCResult ttc = run_ttc(housing_market(e));
    CHECK(xs.allocation == ttc_allocation(e, ttc));
    CHECK(xs.structure == std::vector<uint32_t>{0b11});  // one trading cycle
  }
  SUBCASE("the full-k housing fixed point reproduces the TTC allocation") {
    Economy e = rotation_market();
    TContext ctx(e, 3);
    TTrace trace = iterate_to_fixed_point(ctx);
    std::optional<Allocation> fixed = check_T_fixed_point(ctx, trace.fixed_point);
    REQUIRE(fixed.has_value());
    TTCResult ttc = run_ttc(housing_market(e));
    CHECK(*fixed == ttc_allocation(e, ttc));
  }
}

TEST_CASE("check_T_fixed_point") {
  SUBCASE("a non-fixed profile yields nothing") {
    Economy e = additive_pair();
    TContext ctx(e, 2);
    CHECK_FALSE(check_T_fixed_point(ctx, profile({0, 0})).has_value());
  }
  SUBCASE("the additive pair fixed point is the endowment allocation") {
    Economy e = additive_pair();
    TContext ctx(e, 2);
    auto x = check_T_fixed_point(ctx, profile({1, 2}));
    REQUIRE(x.has_value());
    CHECK(x->bundles[0] == Bundle::single(0));
    CHECK(x->bundles[1] == Bundle::single(1));
    CHECK_FALSE(find_block(e, *x, false, kDefaultBudget, 2).has_value());
  }
  SUBCASE("housing fixed points are weak-core allocations") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      Economy e = generate_economy({"housing", 4, 0, {}, rng()});
      TContext ctx(e, 4);
      auto x = check_T_fixed_point(ctx, iterate_to_fixed_point(ctx).fixed_point);
      REQUIRE(x.has_value());
      CHECK_FALSE(find_block(e, *x, true).has_value());
    }
  }
}

TEST_CASE("ttc_equivalence_trace") {
  SUBCASE("identity and swap markets") {
    Economy id = generate_economy({"housing", 3, 0, {}, 0});
    // overwrite with identity preferences
    for (AgentId i = 0; i < 3; ++i) {
      HousingUtility h;
      h.ranking = {i, (i + 1) % 3, (i + 2) % 3};
      id.utilities[i] = {h};
    }
    TContext ctx(id, 3);
    CHECK(ttc_equivalence_trace(ctx, run_ttc(housing_market(id))));
  }
  SUBCASE("random strict housing markets") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
      Economy e = generate_economy({"housing", 3 + int(rng() % 4), 0, {}, rng()});
      TContext ctx(e, e.num_agents());
      CHECK(ttc_equivalence_trace(ctx, run_ttc(housing_market(e))));
    }
  }
}
