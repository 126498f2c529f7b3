#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "dex/rational.hpp"

namespace dex {

using AgentId = int;   // index into Economy::agents
using ObjectId = int;  // index into Economy::objects

// A set of objects as a bitmask over the economy's object order. Set
// semantics: equality is order-independent, no duplicates.
struct Bundle {
  uint32_t bits = 0;

  static Bundle empty() { return Bundle{0}; }
  static Bundle single(ObjectId o) { return Bundle{uint32_t(1) << o}; }

  bool contains(ObjectId o) const { return bits >> o & 1; }
  bool subset_of(Bundle other) const { return (bits & ~other.bits) == 0; }
  bool disjoint(Bundle other) const { return (bits & other.bits) == 0; }
  int size() const { return __builtin_popcount(bits); }

  Bundle operator|(Bundle o) const { return Bundle{bits | o.bits}; }
  Bundle operator&(Bundle o) const { return Bundle{bits & o.bits}; }
  Bundle minus(Bundle o) const { return Bundle{bits & ~o.bits}; }
  void add(ObjectId o) { bits |= uint32_t(1) << o; }

  std::vector<ObjectId> members() const;

  friend bool operator==(Bundle a, Bundle b) { return a.bits == b.bits; }
  friend auto operator<=>(Bundle a, Bundle b) { return a.bits <=> b.bits; }
};

// Utility families. Every kind maps bundles to ExtValue; -inf encodes
// bundles outside the agent's consumption space.

// Explicit table, total over 2^O: unlisted bundles take `fallback`.
struct TableUtility {
  std::map<uint32_t, ExtValue> entries;
  ExtValue fallback = ExtValue::neg_inf();
};

// Value of a bundle = number of good objects it contains.
struct DichotomousUtility {
  Bundle good;
};

// One indicator per category; at most one object of each category may be
// consumed (more yields -inf). Value = number of categories contributing an
// acceptable object.
struct CategoricalUtility {
  Bundle acceptable;
};

// Positive weight per object, value = sum of weights.
struct AdditiveUtility {
  std::vector<Rational> weights;  // indexed by ObjectId
};

// Strict ranking over single houses, best first; non-singletons get -inf.
// A house at rank r (0 = best) among n is worth n - r.
struct HousingUtility {
  std::vector<ObjectId> ranking;
};

struct UtilityFunction {
  std::variant<TableUtility, DichotomousUtility, CategoricalUtility,
               AdditiveUtility, HousingUtility>
      fn;

  const char* kind() const;
};

struct Economy {
  std::vector<std::string> objects;             // object id -> name
  std::vector<std::string> agents;              // agent id -> name
  std::vector<Bundle> endowments;               // per agent
  std::vector<UtilityFunction> utilities;       // per agent
  std::vector<std::string> category_names;      // empty unless categorical
  std::vector<Bundle> categories;               // object sets per category

  int num_agents() const { return int(agents.size()); }
  int num_objects() const { return int(objects.size()); }
  Bundle all_objects() const {
    return Bundle{num_objects() == 32 ? ~uint32_t(0) : (uint32_t(1) << num_objects()) - 1};
  }
  ObjectId object_index(const std::string& name) const;  // throws InputError
  AgentId agent_index(const std::string& name) const;    // throws InputError
  Bundle endowment_of_coalition(uint32_t coalition_mask) const;
};

// A per-agent utility value vector, indexed exactly by Economy::agents.
using UtilityProfile = std::vector<ExtValue>;

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the Economy invariants: endowments pairwise disjoint, nonempty,
// and covering the object set. Violations are data, not failures.
ValidationReport validate_economy(const Economy& e);

// Family-specific bundle evaluation. x must fit within e's objects.
ExtValue eval(const Economy& e, AgentId i, Bundle x);
ExtValue eval(const UtilityFunction& v, Bundle x, int num_objects,
              const std::vector<Bundle>& categories);

// True iff the bundles (keyed exactly by the coalition) are pairwise
// disjoint and drawn from the coalition's combined endowments.
bool is_S_allocation(const Economy& e, uint32_t coalition_mask,
                     const std::map<AgentId, Bundle>& bundles);

// Dense per-agent value cache over all 2^|O| bundles.
std::vector<ExtValue> eval_table(const Economy& e, AgentId i);

}  // namespace dex
