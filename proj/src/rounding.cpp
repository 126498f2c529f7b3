#include "dex/rounding.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dex/errors.hpp"
#include "dex/io.hpp"

namespace dex {

namespace {

const Rational kZero(0), kOne(1);

bool is_fractional(const Rational& r) { return kZero < r && r < kOne; }

long long count_ones(const FractionalMatrix::Row& row) {
  return std::count(row.entries.begin(), row.entries.end(), kOne);
}

Rational row_sum(const FractionalMatrix::Row& row) {
  Rational s(0);
  for (const Rational& r : row.entries) s += r;
  return s;
}

Rational col_sum(const FractionalMatrix& m, int j, const std::vector<bool>* alive = nullptr) {
  Rational s(0);
  for (size_t i = 0; i < m.rows.size(); ++i) {
    if (alive && !(*alive)[i]) continue;
    s += m.rows[i].entries[j];
  }
  return s;
}

Rational cat_sum(const FractionalMatrix& m, const FractionalMatrix::Row& row, int cat) {
  Rational s(0);
  for (int j = 0; j < m.num_cols(); ++j)
    if (m.category_index[j] == cat) s += row.entries[j];
  return s;
}

void check_matrix_properties(const FractionalMatrix& m, const std::vector<bool>* alive,
                             const std::string& where) {
  for (size_t i = 0; i < m.rows.size(); ++i) {
    if (alive && !(*alive)[i]) continue;
    const auto& row = m.rows[i];
    for (const Rational& r : row.entries)
      if (r < kZero || kOne < r)
        throw InvariantError(where + ": entry outside [0,1] in row of agent " + row.agent);
    if (row.target < 0)
      throw InvariantError(where + ": negative target for agent " + row.agent);
    if (row_sum(row) < Rational(row.target))
      throw InvariantError(where + ": row sum below target for agent " + row.agent);
    if (m.mode == FractionalMatrix::Mode::kCategorical) {
      for (int k = 0; k < int(m.category_names.size()); ++k)
        if (kOne < cat_sum(m, row, k))
          throw InvariantError(where + ": category sum above 1 for agent " + row.agent);
    }
  }
  for (int j = 0; j < m.num_cols(); ++j)
    if (kOne < col_sum(m, j, alive))
      throw InvariantError(where + ": column sum above 1 at object " + m.objects[j]);
}

using Entry = std::pair<int, int>;  // (row, col)

// Adds epsilon at even cycle positions and subtracts it at odd ones. The
// cycle alternates row-sharing and column-sharing neighbours starting with a
// shared row, so row and column sums are unchanged.
struct CycleShift {
  std::vector<Entry> cycle;
  Rational epsilon;
  bool made_integral = false;
};

CycleShift apply_cycle(FractionalMatrix& m, std::vector<Entry> cycle,
                       const std::string& where) {
  if (cycle.size() % 2 != 0 || cycle.size() < 4)
    throw InvariantError(where + ": malformed rounding cycle");
  if (cycle[0].first != cycle[1].first) std::rotate(cycle.begin(), cycle.begin() + 1, cycle.end());
  if (cycle[0].first != cycle[1].first)
    throw InvariantError(where + ": rounding cycle fails to alternate");

  Rational eps;
  bool have = false;
  for (size_t t = 0; t < cycle.size(); ++t) {
    const Rational& b = m.rows[cycle[t].first].entries[cycle[t].second];
    Rational cap = (t % 2 == 0) ? kOne - b : b;
    if (!have || cap < eps) eps = cap, have = true;
  }
  if (m.mode == FractionalMatrix::Mode::kCategorical) {
    std::map<std::pair<int, int>, int> net;  // (row, cat) -> coefficient
    for (size_t t = 0; t < cycle.size(); ++t)
      net[{cycle[t].first, m.category_index[cycle[t].second]}] += (t % 2 == 0) ? 1 : -1;
    for (const auto& [key, coeff] : net) {
      if (coeff <= 0) continue;
      Rational cap = kOne - cat_sum(m, m.rows[key.first], key.second);
      if (Rational(coeff) * eps > cap) eps = cap / Rational(coeff);
    }
  }
  if (!(kZero < eps)) throw InvariantError(where + ": rounding cycle allows no movement");

  CycleShift shift{cycle, eps, false};
  for (size_t t = 0; t < cycle.size(); ++t) {
    Rational& b = m.rows[cycle[t].first].entries[cycle[t].second];
    b = (t % 2 == 0) ? b + eps : b - eps;
    if (b == kZero || b == kOne) shift.made_integral = true;
  }
  return shift;
}

void record_pass(RoundingTrace* trace, const std::string& move, long long before,
                 long long after) {
  if (trace) trace->passes.push_back({move, before, after});
}

}  // namespace

long long FractionalMatrix::fractional_count() const {
  long long n = 0;
  for (const auto& row : rows)
    for (const Rational& r : row.entries)
      if (is_fractional(r)) ++n;
  return n;
}

std::vector<long long> targets_from_profile(const UtilityProfile& u) {
  std::vector<long long> t;
  t.reserve(u.size());
  for (const ExtValue& v : u) {
    if (!v.is_finite()) throw InputError("targets require finite utilities, got -inf");
    t.push_back(rational_ceil(v.finite()));
  }
  return t;
}

FractionalMatrix build_matrix(const Economy& e, const BalancedCollection& bc,
                              const std::map<uint32_t, std::vector<Bundle>>& witnesses,
                              const std::vector<long long>& targets) {
  FractionalMatrix m;
  bool dich = true, cat = true;
  for (const auto& u : e.utilities) {
    dich = dich && std::holds_alternative<DichotomousUtility>(u.fn);
    cat = cat && std::holds_alternative<CategoricalUtility>(u.fn);
  }
  if (dich) m.mode = FractionalMatrix::Mode::kDichotomous;
  else if (cat) m.mode = FractionalMatrix::Mode::kCategorical;
  else throw InputError("build_matrix needs an all-dichotomous or all-categorical economy");

  m.objects = e.objects;
  m.category_names = e.category_names;
  m.category_index.assign(e.num_objects(), -1);
  for (int k = 0; k < int(e.categories.size()); ++k)
    for (ObjectId o : e.categories[k].members()) m.category_index[o] = k;
  for (AgentId i = 0; i < e.num_agents(); ++i) {
    FractionalMatrix::Row row;
    row.agent = e.agents[i];
    row.target = targets[i];
    row.entries.assign(e.num_objects(), Rational(0));
    m.rows.push_back(std::move(row));
  }

  // keep only items that count toward the target: good items, at most one
  // acceptable item per category
  auto sanitize = [&](AgentId i, Bundle x) {
    if (m.mode == FractionalMatrix::Mode::kDichotomous)
      return x & std::get<DichotomousUtility>(e.utilities[i].fn).good;
    Bundle keep = Bundle::empty();
    Bundle acc = std::get<CategoricalUtility>(e.utilities[i].fn).acceptable;
    for (const Bundle& category : e.categories) {
      Bundle good = x & category & acc;
      if (good.bits != 0) keep.add(good.members().front());
    }
    return keep;
  };

  if (bc.coalitions.size() != bc.weights.size())
    throw InputError("balanced collection weights do not match its coalitions");
  for (size_t s = 0; s < bc.coalitions.size(); ++s) {
    auto wit = witnesses.find(bc.coalitions[s]);
    if (wit == witnesses.end())
      throw InputError("missing witness for coalition " +
                       coalition_to_string(e, bc.coalitions[s]));
    std::vector<AgentId> members = coalition_members(bc.coalitions[s]);
    if (wit->second.size() != members.size())
      throw InputError("witness arity mismatch for coalition " +
                       coalition_to_string(e, bc.coalitions[s]));
    for (size_t t = 0; t < members.size(); ++t) {
      AgentId i = members[t];
      Bundle kept = sanitize(i, wit->second[t]);
      if (static_cast<long long>(kept.size()) < targets[i])
        throw InputError("witness for coalition " + coalition_to_string(e, bc.coalitions[s]) +
                         " gives agent " + e.agents[i] + " fewer good items than its target");
      for (ObjectId o : kept.members()) m.rows[i].entries[o] += bc.weights[s];
    }
  }
  check_matrix_properties(m, nullptr, "build_matrix");
  return m;
}

FractionalMatrix round_dichotomous(const FractionalMatrix& m_in, RoundingTrace* trace) {
  if (m_in.mode != FractionalMatrix::Mode::kDichotomous)
    throw InputError("round_dichotomous requires a dichotomous-mode matrix");
  FractionalMatrix m = m_in;
  check_matrix_properties(m, nullptr, "round_dichotomous start");
  if (trace) trace->initial_fractional = m.fractional_count();
  const int rows = int(m.rows.size()), cols = m.num_cols();

  for (;;) {
    long long before = m.fractional_count();
    int deficient = -1;
    for (int i = 0; i < rows; ++i)
      if (count_ones(m.rows[i]) < m.rows[i].target) {
        deficient = i;
        break;
      }
    if (deficient < 0) {
      // targets met; residual fractions carry no assignment
      if (before > 0) {
        for (auto& row : m.rows)
          for (Rational& r : row.entries)
            if (is_fractional(r)) r = kZero;
        record_pass(trace, "drop-residual", before, 0);
      }
      break;
    }

    int j0 = -1;
    for (int j = 0; j < cols; ++j)
      if (is_fractional(m.rows[deficient].entries[j])) {
        j0 = j;
        break;
      }
    if (j0 < 0)
      throw InvariantError("round_dichotomous: deficient row of agent " +
                           m.rows[deficient].agent + " has no fractional entry");

    // walk columns and rows from (deficient, j0) until a terminal move or a
    // cycle closes; rseq/cseq never repeat, so this ends
    std::vector<int> rseq{deficient}, cseq{j0};
    std::string move;
    for (;;) {
      int r = rseq.back(), c = cseq.back();
      int h = -1;
      for (int i = 0; i < rows; ++i)
        if (i != r && kZero < m.rows[i].entries[c]) {
          h = i;
          break;
        }
      if (h < 0) {
        m.rows[r].entries[c] = kOne;  // lone positive entry in its column
        move = "raise-lone";
        break;
      }
      auto seen_row = std::find(rseq.begin(), rseq.end(), h);
      if (seen_row != rseq.end()) {
        int t = int(seen_row - rseq.begin());
        std::vector<Entry> cycle{{rseq[t], cseq.back()}};
        for (size_t q = t; q + 1 < rseq.size(); ++q) {
          cycle.push_back({rseq[q], cseq[q]});
          cycle.push_back({rseq[q + 1], cseq[q]});
        }
        cycle.push_back({rseq.back(), cseq.back()});
        apply_cycle(m, cycle, "round_dichotomous");
        move = "cycle";
        break;
      }
      if (count_ones(m.rows[h]) >= m.rows[h].target) {
        Rational eps = std::min(kOne - m.rows[r].entries[c], m.rows[h].entries[c]);
        m.rows[r].entries[c] += eps;
        m.rows[h].entries[c] -= eps;
        move = "two-entry-shift";
        break;
      }
      rseq.push_back(h);
      int c2 = -1;
      for (int j = 0; j < cols; ++j)
        if (j != c && is_fractional(m.rows[h].entries[j])) {
          c2 = j;
          break;
        }
      if (c2 < 0)
        throw InvariantError("round_dichotomous: row of agent " + m.rows[h].agent +
                             " lacks a second fractional entry");
      auto seen_col = std::find(cseq.begin(), cseq.end(), c2);
      if (seen_col != cseq.end()) {
        int t = int(seen_col - cseq.begin());
        std::vector<Entry> cycle{{rseq[t + 1], cseq[t]}};
        for (size_t q = t + 1; q + 1 < rseq.size(); ++q) {
          cycle.push_back({rseq[q], cseq[q]});
          cycle.push_back({rseq[q + 1], cseq[q]});
        }
        cycle.push_back({rseq.back(), c2});
        apply_cycle(m, cycle, "round_dichotomous");
        move = "cycle";
        break;
      }
      cseq.push_back(c2);
    }

    long long after = m.fractional_count();
    record_pass(trace, move, before, after);
    if (after >= before)
      throw InvariantError("round_dichotomous: pass failed to reduce fractional entries");
    check_matrix_properties(m, nullptr, "round_dichotomous pass");
  }
  return m;
}

namespace {

// One alternating cycle among the positive (all fractional) entries of the
// alive rows. Positive columns have two or more positive rows and alive rows
// have two or more positive entries, so a cycle always exists.
std::vector<Entry> find_categorical_cycle(const FractionalMatrix& m,
                                          const std::vector<bool>& alive) {
  const int rows = int(m.rows.size()), cols = m.num_cols();
  const int nodes = rows + cols;  // rows first, then columns
  std::vector<int> parent(nodes, -2);
  for (int start = 0; start < rows; ++start) {
    if (!alive[start] || parent[start] != -2) continue;
    bool has_entry = false;
    for (int j = 0; j < cols; ++j) has_entry |= kZero < m.rows[start].entries[j];
    if (!has_entry) continue;
    std::vector<int> stack{start};
    parent[start] = -1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      std::vector<int> neighbours;
      if (u < rows) {
        for (int j = 0; j < cols; ++j)
          if (kZero < m.rows[u].entries[j]) neighbours.push_back(rows + j);
      } else {
        for (int i = 0; i < rows; ++i)
          if (alive[i] && kZero < m.rows[i].entries[u - rows]) neighbours.push_back(i);
      }
      for (int v : neighbours) {
        if (v == parent[u]) continue;
        if (parent[v] == -2) {
          parent[v] = u;
          stack.push_back(v);
          continue;
        }
        // close the cycle between two meeting branches via common ancestry
        std::vector<int> pu, pv;
        for (int w = u; w != -1; w = parent[w]) pu.push_back(w);
        for (int w = v; w != -1; w = parent[w]) pv.push_back(w);
        std::reverse(pu.begin(), pu.end());
        std::reverse(pv.begin(), pv.end());
        size_t common = 0;
        while (common + 1 < pu.size() && common + 1 < pv.size() &&
               pu[common + 1] == pv[common + 1])
          ++common;
        std::vector<int> cycle_nodes(pu.begin() + common, pu.end());
        for (size_t t = pv.size(); t-- > common + 1;) cycle_nodes.push_back(pv[t]);
        std::vector<Entry> cycle;
        for (size_t t = 0; t < cycle_nodes.size(); ++t) {
          int a = cycle_nodes[t], b = cycle_nodes[(t + 1) % cycle_nodes.size()];
          cycle.push_back(a < rows ? Entry{a, b - rows} : Entry{b, a - rows});
        }
        return cycle;
      }
    }
  }
  throw InvariantError("round_categorical: no rounding cycle among fractional entries");
}

}  // namespace

RoundOutcome round_categorical(const FractionalMatrix& m_in) {
  if (m_in.mode != FractionalMatrix::Mode::kCategorical)
    throw InputError("round_categorical requires a categorical-mode matrix");
  const int K = int(m_in.category_names.size());
  if (K == 0) throw InputError("round_categorical requires categories");

  FractionalMatrix m = m_in;
  check_matrix_properties(m, nullptr, "round_categorical start");
  RoundOutcome out;
  out.trace.initial_fractional = m.fractional_count();
  const long long pass_bound =
      out.trace.initial_fractional + (long long)(m_in.rows.size()) * (K - 1);
  std::vector<bool> alive(m.rows.size(), true);

  auto preprocess = [&]() {
    for (;;) {
      // (a) a bound category splits off as its own unit-target row
      bool changed = false;
      for (size_t i = 0; i < m.rows.size() && !changed; ++i) {
        if (!alive[i] || m.rows[i].target < 1) continue;
        for (int k = 0; k < K && !changed; ++k) {
          if (cat_sum(m, m.rows[i], k) != kOne) continue;
          bool outside = false;
          for (int j = 0; j < m.num_cols(); ++j)
            if (m.category_index[j] != k && kZero < m.rows[i].entries[j]) outside = true;
          if (!outside && m.rows[i].target == 1) continue;  // already a pure unit row
          FractionalMatrix::Row rest;
          rest.agent = m.rows[i].agent;
          rest.target = m.rows[i].target - 1;
          rest.entries.assign(m.num_cols(), kZero);
          for (int j = 0; j < m.num_cols(); ++j)
            if (m.category_index[j] != k) std::swap(rest.entries[j], m.rows[i].entries[j]);
          m.rows[i].target = 1;
          m.rows.push_back(std::move(rest));
          alive.push_back(true);
          ++out.trace.splits;
          changed = true;
        }
      }
      if (changed) continue;
      // (b) spent rows leave, shedding any slack mass
      for (size_t i = 0; i < m.rows.size() && !changed; ++i) {
        if (!alive[i] || m.rows[i].target != 0) continue;
        alive[i] = false;
        m.rows[i].entries.assign(m.num_cols(), kZero);
        changed = true;
      }
      if (changed) continue;
      // (c) a column with a single taker resolves to that taker
      for (int j = 0; j < m.num_cols() && !changed; ++j) {
        int holder = -1, holders = 0;
        for (size_t i = 0; i < m.rows.size(); ++i)
          if (alive[i] && kZero < m.rows[i].entries[j]) {
            holder = int(i);
            ++holders;
          }
        if (holders != 1 || m.rows[holder].entries[j] == kOne) continue;
        for (int j2 = 0; j2 < m.num_cols(); ++j2)
          if (j2 != j && m.category_index[j2] == m.category_index[j])
            m.rows[holder].entries[j2] = kZero;
        m.rows[holder].entries[j] = kOne;
        changed = true;
      }
      if (changed) continue;
      // (d) ones are banked as assignments
      for (size_t i = 0; i < m.rows.size() && !changed; ++i) {
        if (!alive[i]) continue;
        for (int j = 0; j < m.num_cols() && !changed; ++j) {
          if (m.rows[i].entries[j] != kOne) continue;
          out.assigned[m.rows[i].agent].push_back(m.objects[j]);
          m.rows[i].entries[j] = kZero;
          m.rows[i].target -= 1;
          changed = true;
        }
      }
      if (!changed) break;
    }
  };

  for (;;) {
    preprocess();
    check_matrix_properties(m, &alive, "round_categorical preprocessing");
    if (m.fractional_count() == 0) break;
    if (out.trace.rounding_passes >= pass_bound)
      throw InvariantError("round_categorical exceeded its pass bound of " +
                           std::to_string(pass_bound));
    long long before = m.fractional_count();
    CycleShift shift = apply_cycle(m, find_categorical_cycle(m, alive), "round_categorical");
    ++out.trace.rounding_passes;
    long long after = m.fractional_count();
    record_pass(&out.trace, shift.made_integral ? "cycle-integralize" : "cycle-bind",
                before, after);
    if (after > before)
      throw InvariantError("round_categorical: fractional count increased");
    if (!shift.made_integral && after != before)
      throw InvariantError("round_categorical: inconsistent pass classification");
    check_matrix_properties(m, &alive, "round_categorical pass");
  }
  for (size_t i = 0; i < m.rows.size(); ++i)
    if (alive[i] && m.rows[i].target > 0)
      throw InvariantError("round_categorical finished with an unmet target for agent " +
                           m.rows[i].agent);
  for (auto& [agent, objects] : out.assigned) std::sort(objects.begin(), objects.end());
  return out;
}

Allocation allocation_from_integral(const Economy& e, const FractionalMatrix& m) {
  Allocation x;
  x.bundles.assign(e.num_agents(), Bundle::empty());
  for (const auto& row : m.rows) {
    AgentId i = e.agent_index(row.agent);
    for (int j = 0; j < m.num_cols(); ++j) {
      if (row.entries[j] == kZero) continue;
      if (row.entries[j] != kOne) throw InputError("matrix is not integral");
      x.bundles[i].add(e.object_index(m.objects[j]));
    }
  }
  if (!is_allocation(e, x)) throw InvariantError("integral matrix assigns an object twice");
  return x;
}

Allocation allocation_from_outcome(const Economy& e, const RoundOutcome& out) {
  Allocation x;
  x.bundles.assign(e.num_agents(), Bundle::empty());
  for (const auto& [agent, objects] : out.assigned) {
    AgentId i = e.agent_index(agent);
    for (const std::string& o : objects) x.bundles[i].add(e.object_index(o));
  }
  if (!is_allocation(e, x)) throw InvariantError("rounding outcome assigns an object twice");
  return x;
}

FractionalMatrix matrix_from_json(const nlohmann::json& j) {
  FractionalMatrix m;
  try {
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "dichotomous") m.mode = FractionalMatrix::Mode::kDichotomous;
    else if (mode == "categorical") m.mode = FractionalMatrix::Mode::kCategorical;
    else throw ParseError("unknown matrix mode '" + mode + "'");
    for (const auto& name : j.at("objects")) m.objects.push_back(name.get<std::string>());
    m.category_index.assign(m.objects.size(), -1);
    if (j.contains("categories")) {
      for (const auto& [cname, objs] : j.at("categories").items()) {
        int k = int(m.category_names.size());
        m.category_names.push_back(cname);
        for (const auto& oname : objs) {
          auto it = std::find(m.objects.begin(), m.objects.end(), oname.get<std::string>());
          if (it == m.objects.end()) throw ParseError("category lists unknown object");
          m.category_index[it - m.objects.begin()] = k;
        }
      }
    }
    for (const auto& row_json : j.at("rows")) {
      FractionalMatrix::Row row;
      row.agent = row_json.at("agent").get<std::string>();
      row.target = row_json.at("target").get<long long>();
      row.entries.assign(m.objects.size(), Rational(0));
      for (const auto& [oname, val] : row_json.at("entries").items()) {
        auto it = std::find(m.objects.begin(), m.objects.end(), oname);
        if (it == m.objects.end()) throw ParseError("entry at unknown object '" + oname + "'");
        row.entries[it - m.objects.begin()] = parse_rational(val.get<std::string>());
      }
      m.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed matrix file: ") + ex.what());
  }
  return m;
}

nlohmann::json matrix_to_json(const FractionalMatrix& m) {
  nlohmann::json j;
  j["mode"] = m.mode == FractionalMatrix::Mode::kDichotomous ? "dichotomous" : "categorical";
  j["objects"] = m.objects;
  if (!m.category_names.empty()) {
    nlohmann::json cats;
    for (int k = 0; k < int(m.category_names.size()); ++k) {
      nlohmann::json arr = nlohmann::json::array();
      for (int o = 0; o < m.num_cols(); ++o)
        if (m.category_index[o] == k) arr.push_back(m.objects[o]);
      cats[m.category_names[k]] = arr;
    }
    j["categories"] = cats;
  }
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : m.rows) {
    nlohmann::json rj;
    rj["agent"] = row.agent;
    rj["target"] = row.target;
    nlohmann::json entries;
    for (int o = 0; o < m.num_cols(); ++o)
      if (row.entries[o] != kZero) entries[m.objects[o]] = format_rational(row.entries[o]);
    rj["entries"] = entries.is_null() ? nlohmann::json::object() : entries;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j;
}

FractionalMatrix load_matrix(const std::string& path) {
  return matrix_from_json(parse_json_file(path));
}

}  // namespace dex
