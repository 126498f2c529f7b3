#include "dex/generate.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "dex/errors.hpp"

namespace dex {

namespace {

using Rng = std::mt19937_64;

int pick(Rng& rng, int n) { return int(rng() % uint64_t(n)); }

std::vector<std::string> make_names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Every object to a uniform agent, then empty endowments steal one object
// from the currently largest endowment.
std::vector<Bundle> random_endowments(Rng& rng, int agents, int objects) {
  std::vector<Bundle> w(agents, Bundle::empty());
  for (int o = 0; o < objects; ++o) w[pick(rng, agents)].add(o);
  for (int i = 0; i < agents; ++i) {
    if (w[i].bits != 0) continue;
    int donor = -1;
    for (int h = 0; h < agents; ++h)
      if (w[h].size() >= 2 && (donor < 0 || w[h].size() > w[donor].size())) donor = h;
    if (donor < 0) throw InputError("need at least as many objects as agents");
    ObjectId o = w[donor].members().front();
    w[donor] = w[donor].minus(Bundle::single(o));
    w[i].add(o);
  }
  return w;
}

Bundle random_subset(Rng& rng, int objects) {
  Bundle b = Bundle::empty();
  for (int o = 0; o < objects; ++o)
    if (rng() & 1) b.add(o);
  return b;
}

std::vector<Rational> shuffled_powers_of_two(Rng& rng, int objects) {
  std::vector<long long> powers(objects);
  for (int o = 0; o < objects; ++o) powers[o] = 1LL << o;
  std::shuffle(powers.begin(), powers.end(), rng);
  std::vector<Rational> weights;
  for (long long p : powers) weights.emplace_back(p);
  return weights;
}

}  // namespace

Economy generate_economy(const InstanceSpec& spec) {
  Rng rng(spec.seed);
  Economy e;
  e.agents = make_names("a", spec.agents);

  if (spec.family == "housing") {
    const int n = spec.agents;
    e.objects = make_names("h", n);
    for (int i = 0; i < n; ++i) e.endowments.push_back(Bundle::single(i));
    for (int i = 0; i < n; ++i) {
      HousingUtility h;
      h.ranking.resize(n);
      std::iota(h.ranking.begin(), h.ranking.end(), 0);
      std::shuffle(h.ranking.begin(), h.ranking.end(), rng);
      e.utilities.push_back({h});
    }
    return e;
  }

  if (spec.family == "categorical") {
    if (spec.category_sizes.empty())
      throw InputError("categorical family needs category sizes");
    int total = 0;
    for (int k = 0; k < int(spec.category_sizes.size()); ++k) {
      Bundle cat = Bundle::empty();
      for (int t = 0; t < spec.category_sizes[k]; ++t) {
        e.objects.push_back("c" + std::to_string(k + 1) + "o" + std::to_string(t + 1));
        cat.add(total++);
      }
      e.category_names.push_back("c" + std::to_string(k + 1));
      e.categories.push_back(cat);
    }
    e.endowments = random_endowments(rng, spec.agents, total);
    for (int i = 0; i < spec.agents; ++i)
      e.utilities.push_back({CategoricalUtility{random_subset(rng, total)}});
    return e;
  }

  e.objects = make_names("o", spec.objects);
  e.endowments = random_endowments(rng, spec.agents, spec.objects);
  if (spec.family == "dichotomous") {
    for (int i = 0; i < spec.agents; ++i)
      e.utilities.push_back({DichotomousUtility{random_subset(rng, spec.objects)}});
  } else if (spec.family == "additive-common") {
    AdditiveUtility shared{shuffled_powers_of_two(rng, spec.objects)};
    for (int i = 0; i < spec.agents; ++i) e.utilities.push_back({shared});
  } else if (spec.family == "additive-free") {
    for (int i = 0; i < spec.agents; ++i)
      e.utilities.push_back({AdditiveUtility{shuffled_powers_of_two(rng, spec.objects)}});
  } else {
    throw InputError("unknown instance family '" + spec.family + "'");
  }
  return e;
}

Economy generate_injective_table_economy(int agents, int objects, uint64_t seed) {
  Rng rng(seed);
  Economy e;
  e.agents = make_names("a", agents);
  e.objects = make_names("o", objects);
  e.endowments = random_endowments(rng, agents, objects);
  const uint32_t total = uint32_t(1) << objects;
  for (int i = 0; i < agents; ++i) {
    std::vector<long long> values(total);
    std::iota(values.begin(), values.end(), 1);
    std::shuffle(values.begin(), values.end(), rng);
    TableUtility t;
    for (uint32_t m = 0; m < total; ++m) t.entries[m] = ExtValue(Rational(values[m]));
    e.utilities.push_back({t});
  }
  return e;
}

}  // namespace dex
