#pragma once

#include <vector>

#include "dex/oracle.hpp"

namespace dex {

// A Shapley-Scarf housing market: one house per agent, singleton
// endowments, strict total rankings (the housing utility kind).
struct HousingMarket {
  const Economy* economy = nullptr;
  std::vector<ObjectId> own_house;                // per agent
  std::vector<std::vector<ObjectId>> preference;  // per agent, best first
};

// Throws InputError unless e is a valid housing market.
HousingMarket housing_market(const Economy& e);

struct TTCResult {
  std::vector<ObjectId> assignment;                     // per agent
  std::vector<std::vector<AgentId>> rounds;             // A_1, A_2, ...
  std::vector<std::vector<std::vector<AgentId>>> cycles;  // per round, in pointing order
};

// Gale's algorithm, clearing all cycles of the top-choice digraph in each
// round. Cycles are reported starting from their smallest agent and listed
// by that agent.
TTCResult run_ttc(const HousingMarket& m);

Allocation ttc_allocation(const Economy& e, const TTCResult& r);

}  // namespace dex
