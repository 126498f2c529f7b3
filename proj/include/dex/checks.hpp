#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dex/economy.hpp"
#include "dex/oracle.hpp"

namespace dex {

// True iff no two bundles share a finite value. Multiple -inf bundles are
// permitted: -inf marks "outside the consumption space", not a tie.
bool check_injective(const Economy& e, AgentId i);

// Domain-restricted reading (default): X strictly inside X' implies a
// strictly smaller value, checked only when both values are finite.
// raw=true checks the literal definition, counting -inf pairs.
bool check_strictly_monotone(const Economy& e, AgentId i, bool raw = false);

// The Pareto frontier between i and j from i's viewpoint: for each
// achievable utility level of j within the pair's endowments, the best
// value i can reach. Queries step up to the next stored breakpoint;
// -inf above the largest feasible level.
struct ParetoFrontierPair {
  // (theta, best value for i), theta strictly increasing.
  std::vector<std::pair<Rational, ExtValue>> points;

  ExtValue query(const Rational& theta) const;
  ExtValue query(const ExtValue& theta) const;  // -inf floor maps to the best point
  std::optional<Rational> max_feasible() const;
};

ParetoFrontierPair pareto_frontier_pair(const Economy& e, AgentId i, AgentId j);

struct DtuViolation {
  AgentId i = 0, j = 0;
  Rational theta, theta_prime;
};

struct DtuResult {
  bool ok = false;
  std::optional<DtuViolation> violation;
};

// Discrete transferable utility: for every ordered pair (i, j) and
// achievable levels theta < theta', the frontier drops by at most
// theta' - theta.
DtuResult check_discrete_TU(const Economy& e);

struct GftViolation {
  uint32_t s = 0, s_prime = 0;
  std::map<AgentId, Bundle> x, x_prime;
};

struct GftResult {
  bool ok = false;
  std::optional<GftViolation> violation;
};

// Gains from trade: merging any two coalitions' allocations, some joint
// allocation guarantees overlap members the worse of their two payoffs and
// everyone else their own. Exponential; gated to |A| <= 4 and |O| <= 6.
GftResult check_gains_from_trade(const Economy& e, double budget = kDefaultBudget);

}  // namespace dex
