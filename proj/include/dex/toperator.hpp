#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "dex/oracle.hpp"
#include "dex/ttc.hpp"

namespace dex {

// Immutable context for the T_k operator: a validated all-injective economy,
// the coalition size cap k, per-agent achievable value sets with inverse
// bundle maps, and eagerly built per-coalition achievable-vector caches.
class TContext {
 public:
  TContext(const Economy& e, int k, double budget = kDefaultBudget);

  const Economy& economy() const { return *e_; }
  int k() const { return k_; }
  const UtilityProfile& endowment_profile() const { return endowment_profile_; }
  const std::vector<Rational>& achievable(AgentId i) const { return achievable_[i]; }
  // v_i^{-1} on finite values; throws InputError for values outside U_i.
  Bundle inverse(AgentId i, const ExtValue& value) const;

  struct CoalitionVectors {
    uint32_t mask = 0;
    std::vector<AgentId> members;
    std::vector<std::vector<ExtValue>> all;     // deduped achievable vectors
    std::vector<std::vector<ExtValue>> pareto;  // maximal ones, lex-ascending
  };
  const std::vector<CoalitionVectors>& coalition_vectors() const { return coalitions_; }
  const std::vector<int>& coalitions_of(AgentId i) const { return coalitions_of_[i]; }

 private:
  const Economy* e_;
  int k_;
  UtilityProfile endowment_profile_;
  std::vector<std::vector<Rational>> achievable_;
  std::vector<std::map<Rational, Bundle>> inverse_;
  std::vector<CoalitionVectors> coalitions_;
  std::vector<std::vector<int>> coalitions_of_;
};

// Utilities agent i can reach through a coalition of size <= k that holds
// every partner j at least at u_j. Always contains v_i's own-endowment value.
std::set<ExtValue> b_set(const TContext& ctx, AgentId i, const UtilityProfile& u);

// (T_k u)_i = max B^k_i(u).
UtilityProfile apply_T(const TContext& ctx, const UtilityProfile& u);

struct TTrace {
  std::vector<UtilityProfile> iterates;  // T^m(endowment profile), m = 0,1,...
  UtilityProfile fixed_point;            // T^2-fixed, <= its own image
};

// Iterates from the endowment profile until consecutive even iterates agree.
TTrace iterate_to_fixed_point(const TContext& ctx);

struct CyclePairing {
  UtilityProfile u, tu;
  std::vector<AgentId> a1;  // u_i = (Tu)_i
  std::vector<AgentId> a2;  // u_i < (Tu)_i
  std::vector<std::pair<AgentId, AgentId>> pairs;  // (first, second), first = min id
};

// Splits agents at a T^2 fixed point and pairs A2 along the unique-partner
// digraph. Requires k = 2; throws InvariantError when a partner is not
// unique or a cycle longer than two appears (a discrete-TU precondition
// failure), carrying the offending agents.
CyclePairing classify_and_pair(const TContext& ctx, const UtilityProfile& u);

// The bargaining-set allocation: A1 agents receive their u-bundle, each A2
// pair trades so the first member realizes (Tu)_first. The structure lists
// the A1 trading components and the A2 pairs.
StructuredAllocation construct_bargaining_allocation(const TContext& ctx,
                                                     const CyclePairing& pairing);

// When u = Tu, the bundle profile it names: individually rational and free
// of weak blocks by coalitions of size <= k.
std::optional<Allocation> check_T_fixed_point(const TContext& ctx,
                                              const UtilityProfile& u);

// Equivalence between the T iterates and the TTC rounds: each round-r
// agent's iterates are constant from step 2r-1 on and equal the value of
// their TTC house. Requires k = |A| on a housing market.
bool ttc_equivalence_trace(const TContext& ctx, const TTCResult& ttc);

}  // namespace dex
