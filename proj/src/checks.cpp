#include "dex/checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dex/errors.hpp"

namespace dex {

bool check_injective(const Economy& e, AgentId i) {
  std::vector<ExtValue> values = eval_table(e, i);
  std::vector<Rational> finite;
  finite.reserve(values.size());
  for (const ExtValue& v : values)
    if (v.is_finite()) finite.push_back(v.finite());
  std::sort(finite.begin(), finite.end());
  return std::adjacent_find(finite.begin(), finite.end()) == finite.end();
}

bool check_strictly_monotone(const Economy& e, AgentId i, bool raw) {
  std::vector<ExtValue> values = eval_table(e, i);
  const uint32_t top = uint32_t(1) << e.num_objects();
  for (uint32_t m = 1; m < top; ++m) {
    const ExtValue& big = values[m];
    for (uint32_t s = (m - 1) & m;; s = (s - 1) & m) {
      const ExtValue& small = values[s];
      if (raw) {
        if (!(small < big)) return false;
      } else if (small.is_finite() && big.is_finite() && !(small < big)) {
        return false;
      }
      if (s == 0) break;
    }
  }
  return true;
}

ExtValue ParetoFrontierPair::query(const Rational& theta) const {
  auto it = std::lower_bound(points.begin(), points.end(), theta,
                             [](const auto& p, const Rational& t) { return p.first < t; });
  if (it == points.end()) return ExtValue::neg_inf();
  return it->second;
}

ExtValue ParetoFrontierPair::query(const ExtValue& theta) const {
  if (!theta.is_finite())
    return points.empty() ? ExtValue::neg_inf() : points.front().second;
  return query(theta.finite());
}

std::optional<Rational> ParetoFrontierPair::max_feasible() const {
  if (points.empty()) return std::nullopt;
  return points.back().first;
}

ParetoFrontierPair pareto_frontier_pair(const Economy& e, AgentId i, AgentId j) {
  if (i == j) throw InputError("pareto_frontier_pair requires two distinct agents");
  std::vector<ObjectId> pool = (e.endowments[i] | e.endowments[j]).members();
  const int p = int(pool.size());
  if (p > 12)
    throw SizeRefusal("pair frontier over " + std::to_string(p) + " objects",
                      std::pow(3.0, p));
  // best value for i at each achievable level of j
  std::map<Rational, ExtValue> best;
  std::vector<int> digit(p, 0);  // 0: unassigned, 1: to i, 2: to j
  Bundle xi = Bundle::empty(), xj = Bundle::empty();
  for (;;) {
    ExtValue a = eval(e, j, xj);
    if (a.is_finite()) {
      ExtValue b = eval(e, i, xi);
      auto [it, inserted] = best.emplace(a.finite(), b);
      if (!inserted) it->second = max(it->second, b);
    }
    int t = 0;
    for (; t < p; ++t) {
      Bundle obj = Bundle::single(pool[t]);
      if (digit[t] == 1) xi = xi.minus(obj);
      if (digit[t] == 2) xj = xj.minus(obj);
      if (++digit[t] < 3) {
        (digit[t] == 1 ? xi : xj).add(pool[t]);
        break;
      }
      digit[t] = 0;
    }
    if (t == p) break;
  }
  ParetoFrontierPair out;
  out.points.reserve(best.size());
  for (const auto& [theta, value] : best) out.points.emplace_back(theta, value);
  // suffix maxima: the frontier allows giving j more than the demanded level
  for (int t = int(out.points.size()) - 2; t >= 0; --t)
    out.points[t].second = max(out.points[t].second, out.points[t + 1].second);
  return out;
}

DtuResult check_discrete_TU(const Economy& e) {
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    for (AgentId j = 0; j < e.num_agents(); ++j) {
      if (i == j) continue;
      ParetoFrontierPair f = pareto_frontier_pair(e, i, j);
      for (size_t t = 0; t + 1 < f.points.size(); ++t) {
        const auto& [theta, v] = f.points[t];
        const auto& [theta2, v2] = f.points[t + 1];
        bool ok;
        if (!v.is_finite()) ok = true;          // antitone: v2 is -inf as well
        else if (!v2.is_finite()) ok = false;   // finite value falls off the frontier
        else ok = v.finite() - v2.finite() <= theta2 - theta;
        if (!ok) return {false, DtuViolation{i, j, theta, theta2}};
      }
    }
  }
  return {true, std::nullopt};
}

GftResult check_gains_from_trade(const Economy& e, double budget) {
  if (e.num_agents() > 4 || e.num_objects() > 6)
    throw SizeRefusal("gains-from-trade check is gated to 4 agents and 6 objects",
                      allocation_count(e));
  CoalitionTable table(e, -1, budget);

  auto as_map = [](const CoalitionInfo& info, const std::vector<Bundle>& witness) {
    std::map<AgentId, Bundle> m;
    for (size_t t = 0; t < info.members.size(); ++t) m[info.members[t]] = witness[t];
    return m;
  };

  for (uint32_t s : table.coalition_order()) {
    for (uint32_t s2 : table.coalition_order()) {
      if ((s & s2) == s || (s & s2) == s2) continue;  // nested or equal: trivial
      const CoalitionInfo& a = table.info(s);
      const CoalitionInfo& b = table.info(s2);
      const CoalitionInfo& u = table.info(s | s2);
      for (size_t pa = 0; pa < a.pareto.size(); ++pa) {
        for (size_t pb = 0; pb < b.pareto.size(); ++pb) {
          std::vector<ExtValue> target;
          target.reserve(u.members.size());
          for (AgentId h : u.members) {
            bool in_a = s >> h & 1, in_b = s2 >> h & 1;
            ExtValue va, vb;
            if (in_a)
              va = a.pareto[pa][std::find(a.members.begin(), a.members.end(), h) - a.members.begin()];
            if (in_b)
              vb = b.pareto[pb][std::find(b.members.begin(), b.members.end(), h) - b.members.begin()];
            if (in_a && in_b) target.push_back(va < vb ? va : vb);
            else target.push_back(in_a ? va : vb);
          }
          bool covered = false;
          for (const auto& q : u.pareto) {
            bool ge = true;
            for (size_t t = 0; t < target.size(); ++t)
              if (q[t] < target[t]) {
                ge = false;
                break;
              }
            if (ge) {
              covered = true;
              break;
            }
          }
          if (!covered) {
            GftViolation v;
            v.s = s;
            v.s_prime = s2;
            v.x = as_map(a, a.witness[pa]);
            v.x_prime = as_map(b, b.witness[pb]);
            return {false, v};
          }
        }
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace dex
