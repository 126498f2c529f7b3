#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dex/economy.hpp"

namespace dex {

// Nonempty coalitions of {0..n-1} ordered by size, then lexicographically by
// the sorted member list. Certificates across the toolkit quote coalitions
// in this order.
std::vector<uint32_t> coalitions_in_order(int n, int max_size = -1);

std::vector<AgentId> coalition_members(uint32_t mask);
std::string coalition_to_string(const Economy& e, uint32_t mask);

}  // namespace dex
