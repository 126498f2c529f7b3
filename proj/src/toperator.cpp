#include "dex/toperator.hpp"

#include <algorithm>
#include <cmath>

#include "dex/checks.hpp"
#include "dex/errors.hpp"

namespace dex {

namespace {

double pow_count(double base, int exp) {
  double c = 1;
  for (int i = 0; i < exp; ++i) c *= base;
  return c;
}

std::string agent_list(const Economy& e, const std::vector<AgentId>& agents) {
  std::string out;
  for (AgentId i : agents) {
    if (!out.empty()) out += ",";
    out += e.agents[i];
  }
  return out;
}

}  // namespace

TContext::TContext(const Economy& e, int k, double budget) : e_(&e), k_(k) {
  if (k < 1 || k > e.num_agents())
    throw InputError("coalition size cap k must lie in [1, |A|]");
  std::vector<std::vector<ExtValue>> values;
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    if (!check_injective(e, i))
      throw InputError("agent " + e.agents[i] + " does not have an injective utility");
    values.push_back(eval_table(e, i));
  }
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    std::map<Rational, Bundle> inv;
    std::vector<Rational> ach;
    for (uint32_t m = 0; m < values[i].size(); ++m)
      if (values[i][m].is_finite()) inv.emplace(values[i][m].finite(), Bundle{m});
    for (const auto& [val, _] : inv) ach.push_back(val);
    inverse_.push_back(std::move(inv));
    achievable_.push_back(std::move(ach));
    endowment_profile_.push_back(values[i][e.endowments[i].bits]);
  }
  // eager per-coalition caches of achievable utility vectors
  coalitions_of_.assign(e.num_agents(), {});
  for (uint32_t mask : coalitions_in_order(e.num_agents(), k)) {
    CoalitionVectors cv;
    cv.mask = mask;
    cv.members = coalition_members(mask);
    std::vector<ObjectId> pool = e.endowment_of_coalition(mask).members();
    const int p = int(pool.size());
    const int base = int(cv.members.size()) + 1;
    double count = pow_count(double(base), p);
    if (count > budget)
      throw SizeRefusal("T-operator cache for coalition " + coalition_to_string(e, mask) +
                            " needs " + std::to_string(count) + " steps",
                        count);
    std::set<std::vector<ExtValue>> seen;
    std::vector<int> digit(p, 0);
    std::vector<Bundle> bundles(cv.members.size(), Bundle::empty());
    for (;;) {
      std::vector<ExtValue> vec;
      vec.reserve(cv.members.size());
      for (size_t t = 0; t < cv.members.size(); ++t)
        vec.push_back(values[cv.members[t]][bundles[t].bits]);
      seen.insert(std::move(vec));
      int t = 0;
      for (; t < p; ++t) {
        if (digit[t] >= 1) bundles[digit[t] - 1] = bundles[digit[t] - 1].minus(Bundle::single(pool[t]));
        if (++digit[t] < base) {
          bundles[digit[t] - 1].add(pool[t]);
          break;
        }
        digit[t] = 0;
      }
      if (t == p) break;
    }
    cv.all.assign(seen.begin(), seen.end());
    for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
      bool maximal = true;
      for (const auto& kept : cv.pareto) {
        bool le = true, strict = false;
        for (size_t t = 0; t < it->size(); ++t) {
          if (kept[t] < (*it)[t]) { le = false; break; }
          if ((*it)[t] < kept[t]) strict = true;
        }
        if (le && strict) { maximal = false; break; }
      }
      if (maximal) cv.pareto.push_back(*it);
    }
    std::reverse(cv.pareto.begin(), cv.pareto.end());
    int index = int(coalitions_.size());
    for (AgentId i : cv.members) coalitions_of_[i].push_back(index);
    coalitions_.push_back(std::move(cv));
  }
}

Bundle TContext::inverse(AgentId i, const ExtValue& value) const {
  if (!value.is_finite())
    throw InputError("cannot invert -inf for agent " + e_->agents[i]);
  auto it = inverse_[i].find(value.finite());
  if (it == inverse_[i].end())
    throw InputError("value " + value.str() + " is not achievable for agent " +
                     e_->agents[i]);
  return it->second;
}

std::set<ExtValue> b_set(const TContext& ctx, AgentId i, const UtilityProfile& u) {
  std::set<ExtValue> out;
  for (int idx : ctx.coalitions_of(i)) {
    const auto& cv = ctx.coalition_vectors()[idx];
    size_t self = std::find(cv.members.begin(), cv.members.end(), i) - cv.members.begin();
    for (const auto& vec : cv.all) {
      bool ok = true;
      for (size_t t = 0; t < cv.members.size(); ++t) {
        if (t == self) continue;
        if (vec[t] < u[cv.members[t]]) {
          ok = false;
          break;
        }
      }
      if (ok) out.insert(vec[self]);
    }
  }
  return out;
}

UtilityProfile apply_T(const TContext& ctx, const UtilityProfile& u) {
  const Economy& e = ctx.economy();
  UtilityProfile out(e.num_agents(), ExtValue::neg_inf());
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    ExtValue best = ExtValue::neg_inf();
    for (int idx : ctx.coalitions_of(i)) {
      const auto& cv = ctx.coalition_vectors()[idx];
      size_t self = std::find(cv.members.begin(), cv.members.end(), i) - cv.members.begin();
      for (const auto& vec : cv.pareto) {
        bool ok = true;
        for (size_t t = 0; t < cv.members.size(); ++t) {
          if (t == self) continue;
          if (vec[t] < u[cv.members[t]]) {
            ok = false;
            break;
          }
        }
        if (ok) best = max(best, vec[self]);
      }
    }
    out[i] = best;
  }
  return out;
}

TTrace iterate_to_fixed_point(const TContext& ctx) {
  TTrace trace;
  trace.iterates.push_back(ctx.endowment_profile());
  for (;;) {
    trace.iterates.push_back(apply_T(ctx, trace.iterates.back()));
    trace.iterates.push_back(apply_T(ctx, trace.iterates.back()));
    size_t m = trace.iterates.size() - 1;
    if (trace.iterates[m] == trace.iterates[m - 2]) {
      trace.fixed_point = trace.iterates[m];
      return trace;
    }
  }
}

CyclePairing classify_and_pair(const TContext& ctx, const UtilityProfile& u) {
  const Economy& e = ctx.economy();
  if (ctx.k() != 2) throw InputError("classify_and_pair requires k = 2");
  CyclePairing cp;
  cp.u = u;
  cp.tu = apply_T(ctx, u);
  if (apply_T(ctx, cp.tu) != u)
    throw InputError("classify_and_pair: u is not a fixed point of T^2");
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    if (cp.tu[i] < u[i])
      throw InputError("classify_and_pair: u exceeds Tu at agent " + e.agents[i]);
    (u[i] == cp.tu[i] ? cp.a1 : cp.a2).push_back(i);
  }
  // successor digraph on A2: i -> j when ((Tu)_i, u_j) splits both endowments
  std::map<AgentId, AgentId> succ;
  for (AgentId i : cp.a2) {
    Bundle gain = ctx.inverse(i, cp.tu[i]);
    std::vector<AgentId> partners;
    for (AgentId j = 0; j < e.num_agents(); ++j) {
      if (j == i) continue;
      Bundle keep = ctx.inverse(j, u[j]);
      Bundle pool = e.endowments[i] | e.endowments[j];
      if (gain.disjoint(keep) && (gain | keep) == pool) partners.push_back(j);
    }
    if (partners.size() != 1)
      throw InvariantError("agent " + e.agents[i] + " has " +
                           std::to_string(partners.size()) +
                           " cycle partners; expected exactly one (agents " +
                           agent_list(e, partners) + ")");
    if (std::find(cp.a2.begin(), cp.a2.end(), partners[0]) == cp.a2.end())
      throw InvariantError("cycle partner of " + e.agents[i] + " lies outside A2");
    succ[i] = partners[0];
  }
  std::set<AgentId> placed;
  for (AgentId i : cp.a2) {
    if (placed.count(i)) continue;
    std::vector<AgentId> cycle{i};
    AgentId cur = succ.at(i);
    while (cur != i) {
      cycle.push_back(cur);
      cur = succ.at(cur);
      if (cycle.size() > cp.a2.size())
        throw InvariantError("successor walk failed to close a cycle");
    }
    if (cycle.size() != 2)
      throw InvariantError("trading cycle of length " + std::to_string(cycle.size()) +
                           " (agents " + agent_list(e, cycle) +
                           "); discrete transferable utility must not hold");
    for (AgentId a : cycle) placed.insert(a);
    cp.pairs.emplace_back(std::min(cycle[0], cycle[1]), std::max(cycle[0], cycle[1]));
  }
  std::sort(cp.pairs.begin(), cp.pairs.end());
  return cp;
}

StructuredAllocation construct_bargaining_allocation(const TContext& ctx,
                                                     const CyclePairing& pairing) {
  const Economy& e = ctx.economy();
  StructuredAllocation out;
  out.allocation.bundles.assign(e.num_agents(), Bundle::empty());
  for (AgentId i : pairing.a1)
    out.allocation.bundles[i] = ctx.inverse(i, pairing.u[i]);
  for (const auto& [first, second] : pairing.pairs) {
    out.allocation.bundles[first] = ctx.inverse(first, pairing.tu[first]);
    out.allocation.bundles[second] = ctx.inverse(second, pairing.u[second]);
  }
  if (!is_allocation(e, out.allocation))
    throw InvariantError("bargaining construction produced overlapping bundles");

  // A1 trades decompose into components of mutual endowment use.
  std::vector<int> component(e.num_agents(), -1);
  int n_comp = 0;
  for (AgentId seed : pairing.a1) {
    if (component[seed] >= 0) continue;
    std::vector<AgentId> stack{seed};
    component[seed] = n_comp;
    while (!stack.empty()) {
      AgentId i = stack.back();
      stack.pop_back();
      for (AgentId h : pairing.a1) {
        if (component[h] >= 0) continue;
        bool linked = !out.allocation.bundles[i].disjoint(e.endowments[h]) ||
                      !out.allocation.bundles[h].disjoint(e.endowments[i]);
        if (linked) {
          component[h] = component[i];
          stack.push_back(h);
        }
      }
    }
    ++n_comp;
  }
  std::vector<uint32_t> comp_mask(n_comp, 0);
  for (AgentId i : pairing.a1) comp_mask[component[i]] |= uint32_t(1) << i;
  for (uint32_t mask : comp_mask) out.structure.push_back(mask);
  for (const auto& [first, second] : pairing.pairs)
    out.structure.push_back((uint32_t(1) << first) | (uint32_t(1) << second));
  validate_structured(e, out);
  return out;
}

std::optional<Allocation> check_T_fixed_point(const TContext& ctx,
                                              const UtilityProfile& u) {
  if (apply_T(ctx, u) != u) return std::nullopt;
  const Economy& e = ctx.economy();
  Allocation x;
  x.bundles.reserve(e.num_agents());
  for (AgentId i = 0; i < e.num_agents(); ++i) x.bundles.push_back(ctx.inverse(i, u[i]));
  if (!is_allocation(e, x))
    throw InvariantError("T fixed point names overlapping bundles");
  return x;
}

bool ttc_equivalence_trace(const TContext& ctx, const TTCResult& ttc) {
  const Economy& e = ctx.economy();
  if (ctx.k() != e.num_agents())
    throw InputError("ttc_equivalence_trace requires k = |A|");
  TTrace trace = iterate_to_fixed_point(ctx);
  size_t needed = 2 * ttc.rounds.size() + 2;
  while (trace.iterates.size() < needed + 1)
    trace.iterates.push_back(apply_T(ctx, trace.iterates.back()));
  for (size_t r = 1; r <= ttc.rounds.size(); ++r) {
    for (AgentId i : ttc.rounds[r - 1]) {
      ExtValue house_value = eval(e, i, Bundle::single(ttc.assignment[i]));
      for (size_t m = 2 * r - 1; m < trace.iterates.size(); ++m)
        if (trace.iterates[m][i] != house_value) return false;
    }
  }
  return true;
}

}  // namespace dex
