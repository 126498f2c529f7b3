#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dex/economy.hpp"

namespace dex {

// Seeded instance families. Identical specs produce identical economies.
struct InstanceSpec {
  std::string family;  // dichotomous | categorical | housing | additive-common | additive-free
  int agents = 3;
  int objects = 4;                  // ignored for categorical and housing
  std::vector<int> category_sizes;  // categorical only
  uint64_t seed = 0;
};

Economy generate_economy(const InstanceSpec& spec);

// Random injective table utilities (a seeded shuffle of distinct values);
// not a CLI family, used by the gains-from-trade search.
Economy generate_injective_table_economy(int agents, int objects, uint64_t seed);

}  // namespace dex
