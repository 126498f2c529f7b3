#include "dex/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "dex/errors.hpp"

namespace dex {

namespace {

double pow_count(double base, int exp) {
  double c = 1;
  for (int i = 0; i < exp; ++i) c *= base;
  return c;
}

// Componentwise v <= w with at least one strict coordinate.
bool dominated_weakly(const std::vector<ExtValue>& v, const std::vector<ExtValue>& w) {
  bool strict = false;
  for (size_t t = 0; t < v.size(); ++t) {
    if (w[t] < v[t]) return false;
    if (v[t] < w[t]) strict = true;
  }
  return strict;
}

bool dominated_strictly(const std::vector<ExtValue>& v, const std::vector<ExtValue>& w) {
  for (size_t t = 0; t < v.size(); ++t)
    if (!(v[t] < w[t])) return false;
  return true;
}

// Enumerates S-allocations of `pool` among `members` in canonical
// mixed-radix order; fn returns true to stop early.
void for_each_s_allocation(const std::vector<ObjectId>& pool,
                           const std::vector<AgentId>& members,
                           const std::function<bool(const std::vector<Bundle>&)>& fn) {
  const int p = int(pool.size());
  const int base = int(members.size()) + 1;
  std::vector<int> digit(p, 0);
  std::vector<Bundle> bundles(members.size(), Bundle::empty());
  for (;;) {
    if (fn(bundles)) return;
    int t = 0;
    for (; t < p; ++t) {
      if (digit[t] >= 1) bundles[digit[t] - 1] = bundles[digit[t] - 1].minus(Bundle::single(pool[t]));
      if (++digit[t] < base) {
        bundles[digit[t] - 1].add(pool[t]);
        break;
      }
      digit[t] = 0;
    }
    if (t == p) return;
  }
}

}  // namespace

bool is_allocation(const Economy& e, const Allocation& x) {
  if (int(x.bundles.size()) != e.num_agents()) return false;
  Bundle used = Bundle::empty();
  for (const Bundle& b : x.bundles) {
    if (!b.subset_of(e.all_objects())) return false;
    if (!b.disjoint(used)) return false;
    used = used | b;
  }
  return true;
}

UtilityProfile profile_of(const Economy& e, const Allocation& x) {
  UtilityProfile prof;
  prof.reserve(e.num_agents());
  for (AgentId i = 0; i < e.num_agents(); ++i) prof.push_back(eval(e, i, x.bundles[i]));
  return prof;
}

bool individually_rational(const Economy& e, const Allocation& x) {
  for (AgentId i = 0; i < e.num_agents(); ++i)
    if (eval(e, i, x.bundles[i]) < eval(e, i, e.endowments[i])) return false;
  return true;
}

void validate_structured(const Economy& e, const StructuredAllocation& xs) {
  if (!is_allocation(e, xs.allocation))
    throw InputError("structured allocation: bundles are not a valid allocation");
  uint32_t covered = 0;
  for (uint32_t s : xs.structure) {
    if (s == 0) throw InputError("structured allocation: empty coalition in structure");
    if (s & covered) throw InputError("structured allocation: structure is not a partition");
    covered |= s;
    Bundle pool = e.endowment_of_coalition(s);
    for (AgentId i : coalition_members(s))
      if (!xs.allocation.bundles[i].subset_of(pool))
        throw InputError("structured allocation: agent " + e.agents[i] +
                         " holds objects outside coalition " + coalition_to_string(e, s));
  }
  if (covered != (uint32_t(1) << e.num_agents()) - 1)
    throw InputError("structured allocation: structure does not cover all agents");
}

double allocation_count(const Economy& e) {
  return pow_count(double(e.num_agents() + 1), e.num_objects());
}

void for_each_allocation(const Economy& e, double budget,
                         const std::function<void(const Allocation&)>& fn) {
  double count = allocation_count(e);
  if (count > budget)
    throw SizeRefusal("allocation enumeration needs " + std::to_string(count) +
                          " steps, over the budget of " + std::to_string(budget),
                      count);
  std::vector<ObjectId> pool = e.all_objects().members();
  std::vector<AgentId> everyone;
  for (AgentId i = 0; i < e.num_agents(); ++i) everyone.push_back(i);
  Allocation x;
  for_each_s_allocation(pool, everyone, [&](const std::vector<Bundle>& bundles) {
    x.bundles = bundles;
    fn(x);
    return false;
  });
}

std::vector<Allocation> enumerate_allocations(const Economy& e, double budget) {
  std::vector<Allocation> out;
  for_each_allocation(e, budget, [&](const Allocation& x) { out.push_back(x); });
  return out;
}

CoalitionTable::CoalitionTable(const Economy& e, int max_size, double budget) : e_(&e) {
  order_ = coalitions_in_order(e.num_agents(), max_size);
  std::vector<std::vector<ExtValue>> values;  // dense per-agent eval cache
  for (AgentId i = 0; i < e.num_agents(); ++i) values.push_back(eval_table(e, i));
  for (uint32_t mask : order_) {
    CoalitionInfo info;
    info.mask = mask;
    info.members = coalition_members(mask);
    std::vector<ObjectId> pool = e.endowment_of_coalition(mask).members();
    double count = pow_count(double(info.members.size() + 1), int(pool.size()));
    if (count > budget)
      throw SizeRefusal("coalition " + coalition_to_string(e, mask) + " has " +
                            std::to_string(count) + " S-allocations, over the budget",
                        count);
    std::map<std::vector<ExtValue>, std::vector<Bundle>> seen;
    for_each_s_allocation(pool, info.members, [&](const std::vector<Bundle>& bundles) {
      std::vector<ExtValue> vec;
      vec.reserve(info.members.size());
      for (size_t t = 0; t < info.members.size(); ++t)
        vec.push_back(values[info.members[t]][bundles[t].bits]);
      seen.emplace(std::move(vec), bundles);  // keeps the first witness
      return false;
    });
    // Lex-descending scan: any dominator of v precedes v, so checking
    // against the kept maximal vectors suffices.
    for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
      bool maximal = true;
      for (const auto& kept : info.pareto)
        if (dominated_weakly(it->first, kept)) {
          maximal = false;
          break;
        }
      if (maximal) {
        info.pareto.push_back(it->first);
        info.witness.push_back(it->second);
      }
    }
    // Certificates quote generators in lex-ascending order.
    std::reverse(info.pareto.begin(), info.pareto.end());
    std::reverse(info.witness.begin(), info.witness.end());
    infos_.emplace(mask, std::move(info));
  }
}

const CoalitionInfo& CoalitionTable::info(uint32_t mask) const {
  auto it = infos_.find(mask);
  if (it == infos_.end()) throw InputError("coalition not covered by this table");
  return it->second;
}

std::optional<BlockCertificate> find_block(const Economy& e, const Allocation& x,
                                           bool strong, double budget,
                                           int max_coalition_size) {
  if (!is_allocation(e, x)) throw InputError("find_block: input is not a valid allocation");
  UtilityProfile prof = profile_of(e, x);
  for (uint32_t mask : coalitions_in_order(e.num_agents(), max_coalition_size)) {
    std::vector<AgentId> members = coalition_members(mask);
    std::vector<ObjectId> pool = e.endowment_of_coalition(mask).members();
    double count = pow_count(double(members.size() + 1), int(pool.size()));
    if (count > budget)
      throw SizeRefusal("blocking scan for coalition " + coalition_to_string(e, mask) +
                            " needs " + std::to_string(count) + " steps",
                        count);
    std::optional<BlockCertificate> found;
    for_each_s_allocation(pool, members, [&](const std::vector<Bundle>& bundles) {
      bool strict = false;
      for (size_t t = 0; t < members.size(); ++t) {
        ExtValue v = eval(e, members[t], bundles[t]);
        if (v < prof[members[t]]) return false;
        if (prof[members[t]] < v) strict = true;
        else if (strong) return false;
      }
      if (!strict) return false;
      BlockCertificate cert;
      cert.coalition = mask;
      for (size_t t = 0; t < members.size(); ++t) cert.bundles[members[t]] = bundles[t];
      found = std::move(cert);
      return true;
    });
    if (found) return found;
  }
  return std::nullopt;
}

bool strongly_blocked(const CoalitionTable& table, const UtilityProfile& prof) {
  for (uint32_t mask : table.coalition_order()) {
    const CoalitionInfo& info = table.info(mask);
    std::vector<ExtValue> cur;
    cur.reserve(info.members.size());
    for (AgentId i : info.members) cur.push_back(prof[i]);
    for (const auto& p : info.pareto)
      if (dominated_strictly(cur, p)) return true;
  }
  return false;
}

bool weakly_blocked(const CoalitionTable& table, const UtilityProfile& prof,
                    int max_coalition_size) {
  for (uint32_t mask : table.coalition_order()) {
    if (max_coalition_size >= 0 && __builtin_popcount(mask) > max_coalition_size) continue;
    const CoalitionInfo& info = table.info(mask);
    std::vector<ExtValue> cur;
    cur.reserve(info.members.size());
    for (AgentId i : info.members) cur.push_back(prof[i]);
    for (const auto& p : info.pareto)
      if (dominated_weakly(cur, p)) return true;
  }
  return false;
}

namespace {

std::vector<Allocation> core_allocations(const Economy& e, bool weak, double budget,
                                         bool stop_after_first) {
  CoalitionTable table(e, -1, budget);
  std::vector<Allocation> out;
  for_each_allocation(e, budget, [&](const Allocation& x) {
    if (stop_after_first && !out.empty()) return;
    UtilityProfile prof = profile_of(e, x);
    bool blocked = weak ? strongly_blocked(table, prof) : weakly_blocked(table, prof);
    if (!blocked) out.push_back(x);
  });
  return out;
}

}  // namespace

std::vector<Allocation> weak_core(const Economy& e, double budget) {
  return core_allocations(e, true, budget, false);
}

std::vector<Allocation> strong_core(const Economy& e, double budget) {
  return core_allocations(e, false, budget, false);
}

std::optional<Allocation> find_weak_core_allocation(const Economy& e, double budget) {
  auto found = core_allocations(e, true, budget, true);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<Allocation> pairwise_stable_set(const Economy& e, double budget) {
  CoalitionTable table(e, 2, budget);
  std::vector<Allocation> out;
  for_each_allocation(e, budget, [&](const Allocation& x) {
    UtilityProfile prof = profile_of(e, x);
    for (AgentId i = 0; i < e.num_agents(); ++i)
      if (prof[i] < eval(e, i, e.endowments[i])) return;
    if (!weakly_blocked(table, prof, 2)) out.push_back(x);
  });
  return out;
}

BargainingResult pairwise_bargaining_set(const Economy& e,
                                         const StructuredAllocation& xs,
                                         double budget) {
  validate_structured(e, xs);
  CoalitionTable pairs(e, 2, budget);
  const Allocation& x = xs.allocation;
  UtilityProfile prof = profile_of(e, x);

  std::vector<uint32_t> coalition_of(e.num_agents(), 0);
  for (uint32_t s : xs.structure)
    for (AgentId i : coalition_members(s)) coalition_of[i] = s;

  auto pair_mask = [](AgentId a, AgentId b) {
    return (uint32_t(1) << a) | (uint32_t(1) << b);
  };

  for (AgentId i = 0; i < e.num_agents(); ++i) {
    for (AgentId j = i + 1; j < e.num_agents(); ++j) {
      const CoalitionInfo& info = pairs.info(pair_mask(i, j));
      std::vector<ExtValue> cur = {prof[i], prof[j]};
      for (size_t t = 0; t < info.pareto.size(); ++t) {
        if (!dominated_weakly(cur, info.pareto[t])) continue;
        // A maximal pairwise objection; counterobjections to it also answer
        // every objection it dominates.
        Objection obj{i, j, info.witness[t][0], info.witness[t][1]};

        Allocation derived;
        derived.bundles.assign(e.num_agents(), Bundle::empty());
        for (AgentId h = 0; h < e.num_agents(); ++h) {
          if (h == i) derived.bundles[h] = obj.yi;
          else if (h == j) derived.bundles[h] = obj.yj;
          else if (coalition_of[h] & pair_mask(i, j)) derived.bundles[h] = e.endowments[h];
          else derived.bundles[h] = x.bundles[h];
        }
        UtilityProfile derived_prof = profile_of(e, derived);

        bool countered = false;
        for (AgentId a = 0; a < e.num_agents() && !countered; ++a) {
          for (AgentId b = a + 1; b < e.num_agents() && !countered; ++b) {
            int overlap = __builtin_popcount(pair_mask(a, b) & pair_mask(i, j));
            if (overlap != 1) continue;
            const CoalitionInfo& cinfo = pairs.info(pair_mask(a, b));
            std::vector<ExtValue> dcur = {derived_prof[a], derived_prof[b]};
            for (const auto& q : cinfo.pareto)
              if (dominated_weakly(dcur, q)) {
                countered = true;
                break;
              }
          }
        }
        if (!countered) return {false, obj};
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace dex
