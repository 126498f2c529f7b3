#include "dex/economy.hpp"

#include <algorithm>

#include "dex/errors.hpp"

namespace dex {

std::vector<ObjectId> Bundle::members() const {
  std::vector<ObjectId> out;
  for (int o = 0; o < 32; ++o)
    if (contains(o)) out.push_back(o);
  return out;
}

const char* UtilityFunction::kind() const {
  switch (fn.index()) {
    case 0: return "table";
    case 1: return "dichotomous";
    case 2: return "categorical";
    case 3: return "additive";
    default: return "housing";
  }
}

ObjectId Economy::object_index(const std::string& name) const {
  auto it = std::find(objects.begin(), objects.end(), name);
  if (it == objects.end()) throw InputError("unknown object id '" + name + "'");
  return ObjectId(it - objects.begin());
}

AgentId Economy::agent_index(const std::string& name) const {
  auto it = std::find(agents.begin(), agents.end(), name);
  if (it == agents.end()) throw InputError("unknown agent id '" + name + "'");
  return AgentId(it - agents.begin());
}

Bundle Economy::endowment_of_coalition(uint32_t coalition_mask) const {
  Bundle pool = Bundle::empty();
  for (AgentId i = 0; i < num_agents(); ++i)
    if (coalition_mask >> i & 1) pool = pool | endowments[i];
  return pool;
}

ValidationReport validate_economy(const Economy& e) {
  ValidationReport report;
  if (e.agents.empty()) report.violations.push_back("economy has no agents");
  if (e.objects.empty()) report.violations.push_back("economy has no objects");
  Bundle seen = Bundle::empty();
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    const Bundle w = e.endowments[i];
    if (w.bits == 0)
      report.violations.push_back("empty endowment: agent " + e.agents[i]);
    Bundle overlap = w & seen;
    for (ObjectId o : overlap.members())
      report.violations.push_back("overlapping endowments: object " + e.objects[o] +
                                  " owned more than once (agent " + e.agents[i] + ")");
    seen = seen | w;
  }
  Bundle unowned = e.all_objects().minus(seen);
  for (ObjectId o : unowned.members())
    report.violations.push_back("unowned object: " + e.objects[o]);
  if (!e.categories.empty()) {
    Bundle covered = Bundle::empty();
    for (size_t k = 0; k < e.categories.size(); ++k) {
      Bundle overlap = e.categories[k] & covered;
      for (ObjectId o : overlap.members())
        report.violations.push_back("object " + e.objects[o] + " in more than one category");
      covered = covered | e.categories[k];
    }
    Bundle missing = e.all_objects().minus(covered);
    for (ObjectId o : missing.members())
      report.violations.push_back("object " + e.objects[o] + " has no category");
  }
  return report;
}

ExtValue eval(const UtilityFunction& v, Bundle x, int num_objects,
              const std::vector<Bundle>& categories) {
  if (num_objects < 32 && (x.bits >> num_objects) != 0)
    throw InputError("bundle references an unknown object id");
  if (const auto* t = std::get_if<TableUtility>(&v.fn)) {
    auto it = t->entries.find(x.bits);
    return it != t->entries.end() ? it->second : t->fallback;
  }
  if (const auto* d = std::get_if<DichotomousUtility>(&v.fn))
    return ExtValue(Rational((x & d->good).size()));
  if (const auto* c = std::get_if<CategoricalUtility>(&v.fn)) {
    long long count = 0;
    for (const Bundle& cat : categories) {
      Bundle in_cat = x & cat;
      if (in_cat.size() > 1) return ExtValue::neg_inf();
      if ((in_cat & c->acceptable).bits != 0) ++count;
    }
    return ExtValue(Rational(count));
  }
  if (const auto* a = std::get_if<AdditiveUtility>(&v.fn)) {
    Rational sum(0);
    for (ObjectId o : x.members()) sum += a->weights[o];
    return ExtValue(sum);
  }
  const auto& h = std::get<HousingUtility>(v.fn);
  if (x.size() != 1) return ExtValue::neg_inf();
  ObjectId o = x.members()[0];
  int n = int(h.ranking.size());
  for (int r = 0; r < n; ++r)
    if (h.ranking[r] == o) return ExtValue(Rational(n - r));
  throw InputError("housing ranking does not cover the requested house");
}

ExtValue eval(const Economy& e, AgentId i, Bundle x) {
  return eval(e.utilities[i], x, e.num_objects(), e.categories);
}

bool is_S_allocation(const Economy& e, uint32_t coalition_mask,
                     const std::map<AgentId, Bundle>& bundles) {
  if (coalition_mask == 0) throw InputError("coalition must be nonempty");
  for (const auto& [i, _] : bundles)
    if (!(coalition_mask >> i & 1))
      throw InputError("bundle keyed by agent outside the coalition");
  Bundle pool = e.endowment_of_coalition(coalition_mask);
  Bundle used = Bundle::empty();
  for (const auto& [i, x] : bundles) {
    if (!x.subset_of(pool)) return false;
    if (!x.disjoint(used)) return false;
    used = used | x;
  }
  return true;
}

std::vector<ExtValue> eval_table(const Economy& e, AgentId i) {
  const uint32_t n = uint32_t(1) << e.num_objects();
  std::vector<ExtValue> out;
  out.reserve(n);
  for (uint32_t m = 0; m < n; ++m) out.push_back(eval(e, i, Bundle{m}));
  return out;
}

}  // namespace dex
