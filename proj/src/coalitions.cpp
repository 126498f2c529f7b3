#include "dex/coalitions.hpp"

namespace dex {

namespace {

void emit_combinations(int n, int size, int start, uint32_t acc,
                       std::vector<uint32_t>& out) {
  if (size == 0) {
    out.push_back(acc);
    return;
  }
  for (int i = start; i <= n - size; ++i)
    emit_combinations(n, size - 1, i + 1, acc | (uint32_t(1) << i), out);
}

}  // namespace

std::vector<uint32_t> coalitions_in_order(int n, int max_size) {
  if (max_size < 0 || max_size > n) max_size = n;
  std::vector<uint32_t> out;
  for (int size = 1; size <= max_size; ++size) emit_combinations(n, size, 0, 0, out);
  return out;
}

std::vector<AgentId> coalition_members(uint32_t mask) {
  std::vector<AgentId> out;
  for (int i = 0; i < 32; ++i)
    if (mask >> i & 1) out.push_back(i);
  return out;
}

std::string coalition_to_string(const Economy& e, uint32_t mask) {
  std::string out = "{";
  bool first = true;
  for (AgentId i : coalition_members(mask)) {
    if (!first) out += ",";
    out += e.agents[i];
    first = false;
  }
  return out + "}";
}

}  // namespace dex
