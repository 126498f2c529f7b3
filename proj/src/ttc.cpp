#include "dex/ttc.hpp"

#include <algorithm>

#include "dex/errors.hpp"

namespace dex {

HousingMarket housing_market(const Economy& e) {
  if (e.num_agents() != e.num_objects())
    throw InputError("housing market needs exactly one house per agent");
  ValidationReport report = validate_economy(e);
  if (!report.ok())
    throw InputError("housing market economy is invalid: " + report.violations.front());
  HousingMarket m;
  m.economy = &e;
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    if (e.endowments[i].size() != 1)
      throw InputError("agent " + e.agents[i] + " must own exactly one house");
    const auto* h = std::get_if<HousingUtility>(&e.utilities[i].fn);
    if (!h) throw InputError("agent " + e.agents[i] + " must have a housing utility");
    m.own_house.push_back(e.endowments[i].members()[0]);
    m.preference.push_back(h->ranking);
  }
  return m;
}

TTCResult run_ttc(const HousingMarket& m) {
  const Economy& e = *m.economy;
  const int n = e.num_agents();
  TTCResult result;
  result.assignment.assign(n, -1);
  std::vector<AgentId> owner(n, -1);  // house -> owner, among remaining
  for (AgentId i = 0; i < n; ++i) owner[m.own_house[i]] = i;
  std::vector<bool> agent_out(n, false), house_out(n, false);
  int remaining = n;

  while (remaining > 0) {
    // top remaining choice of each remaining agent
    std::vector<ObjectId> points_to(n, -1);
    for (AgentId i = 0; i < n; ++i) {
      if (agent_out[i]) continue;
      for (ObjectId h : m.preference[i])
        if (!house_out[h]) {
          points_to[i] = h;
          break;
        }
    }
    // every remaining agent lies on a path into a cycle of i -> owner(top(i))
    std::vector<std::vector<AgentId>> round_cycles;
    std::vector<AgentId> round_agents;
    std::vector<int> state(n, 0);  // 0 unvisited, 1 on path, 2 done (this round)
    for (AgentId start = 0; start < n; ++start) {
      if (agent_out[start] || state[start] != 0) continue;
      std::vector<AgentId> path;
      AgentId cur = start;
      while (state[cur] == 0) {
        state[cur] = 1;
        path.push_back(cur);
        cur = owner[points_to[cur]];
      }
      if (state[cur] == 1) {
        // extract the cycle, rotated to start at its smallest agent
        auto it = std::find(path.begin(), path.end(), cur);
        std::vector<AgentId> cycle(it, path.end());
        auto smallest = std::min_element(cycle.begin(), cycle.end());
        std::rotate(cycle.begin(), smallest, cycle.end());
        round_cycles.push_back(cycle);
      }
      for (AgentId a : path) state[a] = 2;
    }
    std::sort(round_cycles.begin(), round_cycles.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (const auto& cycle : round_cycles) {
      for (AgentId i : cycle) {
        result.assignment[i] = points_to[i];
        agent_out[i] = true;
        house_out[m.own_house[i]] = true;
        round_agents.push_back(i);
        --remaining;
      }
    }
    if (round_agents.empty())
      throw InvariantError("TTC round cleared no cycle");  // unreachable for strict rankings
    std::sort(round_agents.begin(), round_agents.end());
    result.rounds.push_back(round_agents);
    result.cycles.push_back(round_cycles);
  }
  return result;
}

Allocation ttc_allocation(const Economy& e, const TTCResult& r) {
  Allocation x;
  x.bundles.reserve(e.num_agents());
  for (AgentId i = 0; i < e.num_agents(); ++i)
    x.bundles.push_back(Bundle::single(r.assignment[i]));
  return x;
}

}  // namespace dex
