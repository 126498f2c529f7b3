#include <doctest.h>

#include "dex/errors.hpp"
#include "dex/generate.hpp"
#include "dex/oracle.hpp"
#include "dex/ttc.hpp"

using namespace dex;

namespace {

Economy housing(const std::vector<std::vector<int>>& rankings) {
  Economy e;
  const int n = int(rankings.size());
  for (int i = 1; i <= n; ++i) {
    e.objects.push_back("h" + std::to_string(i));
    e.agents.push_back(std::to_string(i));
  }
  for (int i = 0; i < n; ++i) {
    e.endowments.push_back(Bundle::single(i));
    HousingUtility h;
    for (int r : rankings[i]) h.ranking.push_back(r);
    e.utilities.push_back({h});
  }
  return e;
}

}  // namespace

TEST_CASE("everyone topping their own house clears in one round") {
  Economy e = housing({{0, 1, 2}, {1, 0, 2}, {2, 0, 1}});
  TTCResult r = run_ttc(housing_market(e));
  CHECK(r.rounds.size() == 1);
  CHECK(r.rounds[0] == std::vector<AgentId>{0, 1, 2});
  for (AgentId i = 0; i < 3; ++i) CHECK(r.assignment[i] == i);
  CHECK(r.cycles[0].size() == 3);  // three self-loops
}

TEST_CASE("swap then leftover") {
  // 1: h2 > h1 > h3;  2: h1 > h2 > h3;  3: h1 > h3 > h2
  Economy e = housing({{1, 0, 2}, {0, 1, 2}, {0, 2, 1}});
  TTCResult r = run_ttc(housing_market(e));
  REQUIRE(r.rounds.size() == 2);
  CHECK(r.rounds[0] == std::vector<AgentId>{0, 1});
  CHECK(r.rounds[1] == std::vector<AgentId>{2});
  CHECK(r.assignment[0] == 1);
  CHECK(r.assignment[1] == 0);
  CHECK(r.assignment[2] == 2);
}

TEST_CASE("three-way rotation clears as one cycle") {
  // 1: h2 first, 2: h3 first, 3: h1 first
  Economy e = housing({{1, 0, 2}, {2, 1, 0}, {0, 2, 1}});
  TTCResult r = run_ttc(housing_market(e));
  REQUIRE(r.rounds.size() == 1);
  CHECK(r.rounds[0] == std::vector<AgentId>{0, 1, 2});
  REQUIRE(r.cycles[0].size() == 1);
  CHECK(r.cycles[0][0] == std::vector<AgentId>{0, 1, 2});
  CHECK(r.assignment[0] == 1);
  CHECK(r.assignment[1] == 2);
  CHECK(r.assignment[2] == 0);
}

TEST_CASE("housing_market validates its input") {
  Economy e = housing({{0, 1}, {1, 0}});
  e.endowments[0] = Bundle::single(0) | Bundle::single(1);
  e.endowments[1] = Bundle::empty();
  CHECK_THROWS_AS(housing_market(e), InputError);
}

TEST_CASE("TTC output is a weak-core allocation with partitioned rounds") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    InstanceSpec spec{"housing", 3 + int(seed % 4), 0, {}, seed};
    Economy e = generate_economy(spec);
    TTCResult r = run_ttc(housing_market(e));

    std::vector<int> seen(e.num_agents(), 0), houses(e.num_agents(), 0);
    for (const auto& round : r.rounds)
      for (AgentId i : round) ++seen[i];
    for (AgentId i = 0; i < e.num_agents(); ++i) {
      CHECK(seen[i] == 1);
      ++houses[r.assignment[i]];
    }
    for (AgentId i = 0; i < e.num_agents(); ++i) CHECK(houses[i] == 1);

    // every agent gets their favourite house among those not taken earlier
    Bundle gone = Bundle::empty();
    for (size_t round = 0; round < r.rounds.size(); ++round) {
      for (AgentId i : r.rounds[round]) {
        const auto& pref = std::get<HousingUtility>(e.utilities[i].fn).ranking;
        for (ObjectId h : pref) {
          if (gone.contains(h)) continue;
          CHECK(r.assignment[i] == h);
          break;
        }
        // the assigned house is owned within the same round
        bool owned_in_round = false;
        for (AgentId other : r.rounds[round])
          owned_in_round = owned_in_round || e.endowments[other].contains(r.assignment[i]);
        CHECK(owned_in_round);
      }
      for (AgentId i : r.rounds[round]) gone.add(r.assignment[i]);
    }

    Allocation x = ttc_allocation(e, r);
    CHECK(individually_rational(e, x));
    CHECK_FALSE(find_block(e, x, true).has_value());  // weak core membership
  }
}
