#include "dex/ntu.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dex/errors.hpp"
#include "dex/io.hpp"

namespace dex {

bool NTUGame::feasible(uint32_t coalition, const std::vector<ExtValue>& u_full) const {
  if (coalition == 0) return true;  // comprehensive closure of V({}) is everything
  auto it = generators.find(coalition);
  if (it == generators.end()) return false;
  std::vector<AgentId> members = coalition_members(coalition);
  for (const auto& g : it->second) {
    bool ok = true;
    for (size_t t = 0; t < members.size(); ++t)
      if (g[t] < u_full[members[t]]) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

NTUGame build_ntu_game(const Economy& e, double budget) {
  NTUGame g;
  g.agents = e.agents;
  CoalitionTable table(e, -1, budget);
  for (uint32_t mask : table.coalition_order())
    g.generators[mask] = table.info(mask).pareto;
  return g;
}

namespace {

// Solves sum_{S in support, S ∋ i} delta_S = 1 for all i by exact Gaussian
// elimination. Returns the weights when the solution is unique and strictly
// positive.
std::optional<std::vector<Rational>> unique_positive_weights(
    const std::vector<uint32_t>& support, int n) {
  const int m = int(support.size());
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(m + 1, Rational(0)));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < m; ++k)
      if (support[k] >> i & 1) a[i][k] = Rational(1);
    a[i][m] = Rational(1);
  }
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < m && rank < n; ++col) {
    int pivot = -1;
    for (int r = rank; r < n; ++r)
      if (a[r][col] != Rational(0)) {
        pivot = r;
        break;
      }
    if (pivot < 0) return std::nullopt;  // dependent columns: never unique
    std::swap(a[rank], a[pivot]);
    Rational inv = a[rank][col];
    for (int c = col; c <= m; ++c) a[rank][c] /= inv;
    for (int r = 0; r < n; ++r) {
      if (r == rank || a[r][col] == Rational(0)) continue;
      Rational f = a[r][col];
      for (int c = col; c <= m; ++c) a[r][c] -= f * a[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < m) return std::nullopt;
  for (int r = rank; r < n; ++r)
    if (a[r][m] != Rational(0)) return std::nullopt;  // inconsistent
  std::vector<Rational> delta(m, Rational(0));
  for (int r = 0; r < rank; ++r) delta[pivot_col[r]] = a[r][m];
  for (const Rational& d : delta)
    if (d <= Rational(0)) return std::nullopt;
  return delta;
}

void emit_supports(const std::vector<uint32_t>& coalitions, int want, int start,
                   std::vector<uint32_t>& acc,
                   const std::function<void(const std::vector<uint32_t>&)>& fn) {
  if (want == 0) {
    fn(acc);
    return;
  }
  for (int t = start; t + want <= int(coalitions.size()); ++t) {
    acc.push_back(coalitions[t]);
    emit_supports(coalitions, want - 1, t + 1, acc, fn);
    acc.pop_back();
  }
}

}  // namespace

std::vector<BalancedCollection> minimal_balanced_collections(int n) {
  if (n > 4) throw SizeRefusal("minimal balanced collections are gated to 4 agents",
                               double(n));
  if (n < 1) throw InputError("need at least one agent");
  std::vector<uint32_t> coalitions = coalitions_in_order(n);
  std::vector<BalancedCollection> out;
  std::vector<uint32_t> acc;
  for (int size = 1; size <= n; ++size) {
    emit_supports(coalitions, size, 0, acc, [&](const std::vector<uint32_t>& support) {
      auto weights = unique_positive_weights(support, n);
      if (weights) out.push_back({support, *weights});
    });
  }
  return out;
}

BalancedResult check_balanced(const NTUGame& g) {
  const int n = g.num_agents();
  if (n > 4) throw SizeRefusal("balancedness check is gated to 4 agents", double(n));
  const uint32_t grand = (uint32_t(1) << n) - 1;
  for (const BalancedCollection& coll : minimal_balanced_collections(n)) {
    if (std::find(coll.coalitions.begin(), coll.coalitions.end(), grand) !=
        coll.coalitions.end())
      continue;  // u in V(A) holds by assumption
    const int m = int(coll.coalitions.size());
    std::vector<const std::vector<std::vector<ExtValue>>*> gens(m);
    bool missing = false;
    for (int k = 0; k < m; ++k) {
      auto it = g.generators.find(coll.coalitions[k]);
      if (it == g.generators.end() || it->second.empty()) {
        missing = true;  // V(S) empty: the intersection is empty, nothing to check
        break;
      }
      gens[k] = &it->second;
    }
    if (missing) continue;
    // The maximal elements of the intersection are coordinatewise minima
    // over one generator per coalition; a violation anywhere implies one at
    // such a point.
    std::vector<size_t> choice(m, 0);
    for (;;) {
      std::vector<ExtValue> u(n, ExtValue::neg_inf());
      std::vector<bool> seen(n, false);
      for (int k = 0; k < m; ++k) {
        std::vector<AgentId> members = coalition_members(coll.coalitions[k]);
        const auto& vec = (*gens[k])[choice[k]];
        for (size_t t = 0; t < members.size(); ++t) {
          AgentId i = members[t];
          if (!seen[i] || vec[t] < u[i]) u[i] = vec[t];
          seen[i] = true;
        }
      }
      if (!g.feasible(grand, u)) return {false, BalancednessViolation{coll, u}};
      int k = 0;
      for (; k < m; ++k) {
        if (++choice[k] < gens[k]->size()) break;
        choice[k] = 0;
      }
      if (k == m) break;
    }
  }
  return {true, std::nullopt};
}

ConvexResult check_ordinal_convexity(const NTUGame& g) {
  const int n = g.num_agents();
  if (n > 4) throw SizeRefusal("ordinal convexity check is gated to 4 agents", double(n));
  std::vector<uint32_t> order = coalitions_in_order(n);
  for (uint32_t s : order) {
    for (uint32_t s2 : order) {
      if ((s & s2) == s || (s & s2) == s2) continue;  // nested: trivial
      if ((s & s2) == 0) continue;  // disjoint: V(S∩S') is unconstrained
      auto is_ = g.generators.find(s);
      auto is2 = g.generators.find(s2);
      if (is_ == g.generators.end() || is2 == g.generators.end()) continue;
      std::vector<AgentId> ma = coalition_members(s), mb = coalition_members(s2);
      for (const auto& ga : is_->second) {
        for (const auto& gb : is2->second) {
          std::vector<ExtValue> u(n, ExtValue::neg_inf());
          std::vector<bool> seen(n, false);
          for (size_t t = 0; t < ma.size(); ++t) {
            u[ma[t]] = ga[t];
            seen[ma[t]] = true;
          }
          for (size_t t = 0; t < mb.size(); ++t) {
            AgentId i = mb[t];
            if (!seen[i] || gb[t] < u[i]) u[i] = gb[t];
            seen[i] = true;
          }
          if (!g.feasible(s & s2, u) && !g.feasible(s | s2, u))
            return {false, ConvexityViolation{s, s2, u}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

std::vector<std::vector<ExtValue>> ntu_weak_core(const NTUGame& g) {
  const int n = g.num_agents();
  if (n > 4) throw SizeRefusal("NTU weak core is gated to 4 agents", double(n));
  const uint32_t grand = (uint32_t(1) << n) - 1;
  auto it = g.generators.find(grand);
  if (it == g.generators.end()) return {};
  std::vector<std::vector<ExtValue>> core;
  for (const auto& u : it->second) {
    bool dominated = false;
    for (const auto& [mask, gens] : g.generators) {
      if (mask == 0) continue;
      std::vector<AgentId> members = coalition_members(mask);
      for (const auto& h : gens) {
        bool strict = true;
        for (size_t t = 0; t < members.size(); ++t)
          if (!(u[members[t]] < h[t])) {
            strict = false;
            break;
          }
        if (strict) {
          dominated = true;
          break;
        }
      }
      if (dominated) break;
    }
    if (!dominated) core.push_back(u);
  }
  return core;
}

NTUGame ntu_game_from_json(const nlohmann::json& j) {
  NTUGame g;
  try {
    for (const auto& name : j.at("agents")) g.agents.push_back(name.get<std::string>());
    if (g.agents.size() > 8) throw ParseError("NTU games are limited to 8 agents");
    for (const auto& [key, vecs] : j.at("generators").items()) {
      uint32_t mask = 0;
      std::stringstream ss(key);
      std::string part;
      while (std::getline(ss, part, ',')) {
        auto it = std::find(g.agents.begin(), g.agents.end(), part);
        if (it == g.agents.end()) throw ParseError("unknown agent '" + part + "' in coalition key");
        mask |= uint32_t(1) << (it - g.agents.begin());
      }
      if (mask == 0) throw ParseError("empty coalition key in generators");
      const size_t size = coalition_members(mask).size();
      std::vector<std::vector<ExtValue>> gens;
      for (const auto& vec : vecs) {
        std::vector<ExtValue> v;
        for (const auto& x : vec)
          v.push_back(x.is_string() ? parse_ext_value(x.get<std::string>())
                                    : ExtValue(Rational(x.get<long long>())));
        if (v.size() != size)
          throw ParseError("generator arity mismatch for coalition '" + key + "'");
        gens.push_back(std::move(v));
      }
      g.generators[mask] = std::move(gens);
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed NTU game file: ") + ex.what());
  }
  return g;
}

nlohmann::json ntu_game_to_json(const NTUGame& g) {
  nlohmann::json j;
  j["agents"] = g.agents;
  nlohmann::json gens;
  for (const auto& [mask, vecs] : g.generators) {
    std::string key;
    for (AgentId i : coalition_members(mask)) {
      if (!key.empty()) key += ",";
      key += g.agents[i];
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vecs) {
      nlohmann::json vec = nlohmann::json::array();
      for (const ExtValue& x : v) vec.push_back(x.str());
      arr.push_back(vec);
    }
    gens[key] = arr;
  }
  j["generators"] = gens;
  return j;
}

NTUGame load_ntu_game(const std::string& path) {
  return ntu_game_from_json(parse_json_file(path));
}

}  // namespace dex
