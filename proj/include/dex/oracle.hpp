#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dex/coalitions.hpp"
#include "dex/economy.hpp"

namespace dex {

inline constexpr double kDefaultBudget = 1 << 20;

// Disjoint bundles per agent; objects may remain unassigned.
struct Allocation {
  std::vector<Bundle> bundles;  // indexed by agent

  friend bool operator==(const Allocation& a, const Allocation& b) {
    return a.bundles == b.bundles;
  }
};

bool is_allocation(const Economy& e, const Allocation& x);
UtilityProfile profile_of(const Economy& e, const Allocation& x);
bool individually_rational(const Economy& e, const Allocation& x);

// An allocation plus the trading coalitions through which each agent
// received their bundle. The bargaining-set oracle needs the structure to
// rebuild the derived allocation after an objection: agents whose coalition
// touches an objector fall back to their endowments.
struct StructuredAllocation {
  Allocation allocation;
  std::vector<uint32_t> structure;  // coalition masks partitioning the agents
};

// Throws InputError when the structure is not a partition or some
// coalition's bundles stray outside its combined endowments.
void validate_structured(const Economy& e, const StructuredAllocation& xs);

// Every allocation exactly once: each object assigned to one agent or left
// unassigned, in mixed-radix counting order (object 0 least significant,
// digit order: unassigned, agent 0, agent 1, ...).
void for_each_allocation(const Economy& e, double budget,
                         const std::function<void(const Allocation&)>& fn);
std::vector<Allocation> enumerate_allocations(const Economy& e,
                                              double budget = kDefaultBudget);
double allocation_count(const Economy& e);

// Per-coalition achievable utility vectors. `pareto` holds the maximal
// vectors in lexicographic order; `witness` the first S-allocation found
// realizing each vector (bundles indexed like `members`).
struct CoalitionInfo {
  uint32_t mask = 0;
  std::vector<AgentId> members;
  std::vector<std::vector<ExtValue>> pareto;
  std::vector<std::vector<Bundle>> witness;
};

class CoalitionTable {
 public:
  CoalitionTable(const Economy& e, int max_size = -1,
                 double budget = kDefaultBudget);
  const CoalitionInfo& info(uint32_t mask) const;
  const std::vector<uint32_t>& coalition_order() const { return order_; }
  const Economy& economy() const { return *e_; }

 private:
  const Economy* e_;
  std::vector<uint32_t> order_;
  std::map<uint32_t, CoalitionInfo> infos_;
};

struct BlockCertificate {
  uint32_t coalition = 0;
  std::map<AgentId, Bundle> bundles;
};

// First weakly (strong=false) or strongly (strong=true) blocking coalition
// with witness, scanning coalitions by size then lexicographic order and
// S-allocations in canonical enumeration order.
std::optional<BlockCertificate> find_block(const Economy& e, const Allocation& x,
                                           bool strong,
                                           double budget = kDefaultBudget,
                                           int max_coalition_size = -1);

// Exact solution sets by exhaustive search, in allocation enumeration order.
std::vector<Allocation> weak_core(const Economy& e, double budget = kDefaultBudget);
std::vector<Allocation> strong_core(const Economy& e, double budget = kDefaultBudget);
// First weak-core member, if any (cheaper nonemptiness check).
std::optional<Allocation> find_weak_core_allocation(const Economy& e,
                                                    double budget = kDefaultBudget);

bool strongly_blocked(const CoalitionTable& table, const UtilityProfile& prof);
bool weakly_blocked(const CoalitionTable& table, const UtilityProfile& prof,
                    int max_coalition_size = -1);

// Individually rational allocations admitting no weak block by a pair.
std::vector<Allocation> pairwise_stable_set(const Economy& e,
                                            double budget = kDefaultBudget);

struct Objection {
  AgentId i = 0, j = 0;
  Bundle yi, yj;
};

struct BargainingResult {
  bool in_set = false;
  std::optional<Objection> unanswered;
};

// True iff every pairwise objection to xs admits a pairwise counterobjection
// (a pair overlapping the objectors in exactly one agent that objects to the
// derived allocation). Returns the first unanswered objection otherwise.
BargainingResult pairwise_bargaining_set(const Economy& e,
                                         const StructuredAllocation& xs,
                                         double budget = kDefaultBudget);

}  // namespace dex
