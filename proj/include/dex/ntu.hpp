#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dex/oracle.hpp"

namespace dex {

// A finitely generated NTU game with comprehensive (downward-closed)
// semantics: u is feasible for S iff some generator weakly dominates u on
// S's coordinates.
struct NTUGame {
  std::vector<std::string> agents;
  // coalition mask -> generator vectors over the coalition's members in
  // ascending agent order
  std::map<uint32_t, std::vector<std::vector<ExtValue>>> generators;

  int num_agents() const { return int(agents.size()); }
  bool feasible(uint32_t coalition, const std::vector<ExtValue>& u_full) const;
};

// V(S) generated by the utility vectors of all S-allocations,
// Pareto-filtered (comprehensive closure is unchanged).
NTUGame build_ntu_game(const Economy& e, double budget = kDefaultBudget);

struct BalancedCollection {
  std::vector<uint32_t> coalitions;
  std::vector<Rational> weights;  // delta_S > 0, summing to 1 over each agent
};

// All minimal balanced collections on n agents: supports with linearly
// independent incidence vectors whose unique balancing weights are strictly
// positive. Ordered by (collection size, coalition masks in size-lex order).
std::vector<BalancedCollection> minimal_balanced_collections(int n);

struct BalancednessViolation {
  BalancedCollection collection;
  std::vector<ExtValue> u;
};

struct BalancedResult {
  bool ok = false;
  std::optional<BalancednessViolation> violation;
};

// Scarf's condition: u feasible for every member of a balanced collection
// implies u feasible for the grand coalition. It suffices to test the
// coordinatewise minima over generator choices, which are achievable-grid
// points dominating all candidates.
BalancedResult check_balanced(const NTUGame& g);

struct ConvexityViolation {
  uint32_t s = 0, s_prime = 0;
  std::vector<ExtValue> u;
};

struct ConvexResult {
  bool ok = false;
  std::optional<ConvexityViolation> violation;
};

// V(S) ∩ V(S') ⊆ V(S∩S') ∪ V(S∪S') for all coalition pairs.
ConvexResult check_ordinal_convexity(const NTUGame& g);

// Generators of V(A) not strictly dominated on any coalition's coordinates.
std::vector<std::vector<ExtValue>> ntu_weak_core(const NTUGame& g);

// File format: `agents` plus `generators` keyed by comma-joined agent ids.
NTUGame ntu_game_from_json(const nlohmann::json& j);
nlohmann::json ntu_game_to_json(const NTUGame& g);
NTUGame load_ntu_game(const std::string& path);

}  // namespace dex
