#include "dex/examples.hpp"

#include <algorithm>

namespace dex {
namespace examples {

namespace {

// Completes an ordinal table over all bundles: listed bundles take the top
// values in listed order, every unlisted bundle sits strictly below the last
// listed one (the endowment), in ascending mask order.
TableUtility complete_table(int num_objects, const std::vector<Bundle>& listed) {
  TableUtility t;
  const uint32_t total = uint32_t(1) << num_objects;
  long long next = total;
  for (const Bundle& b : listed)
    if (!t.entries.count(b.bits)) t.entries[b.bits] = ExtValue(Rational(next--));
  for (uint32_t m = 0; m < total; ++m)
    if (!t.entries.count(m)) t.entries[m] = ExtValue(Rational(next--));
  t.fallback = ExtValue::neg_inf();  // unreachable: the table is total
  return t;
}

Economy shoe_base() {
  Economy e;
  e.objects = {"l1", "l2", "l3", "r1", "r2", "r3"};
  e.agents = {"1", "2", "3"};
  for (int i = 0; i < 3; ++i) {
    Bundle w = Bundle::empty();
    w.add(i);      // l_i
    w.add(3 + i);  // r_i
    e.endowments.push_back(w);
  }
  return e;
}

Bundle pair_of(const Economy& e, const std::string& a, const std::string& b) {
  Bundle x = Bundle::empty();
  x.add(e.object_index(a));
  x.add(e.object_index(b));
  return x;
}

}  // namespace

Economy ex1_economy() {
  Economy e = shoe_base();
  e.utilities.push_back({complete_table(
      6, {pair_of(e, "l2", "r3"), pair_of(e, "l3", "r1"), pair_of(e, "l1", "r1")})});
  e.utilities.push_back({complete_table(
      6, {pair_of(e, "l3", "r1"), pair_of(e, "l2", "r3"), pair_of(e, "l2", "r2")})});
  e.utilities.push_back({complete_table(
      6, {pair_of(e, "l1", "r2"), pair_of(e, "l3", "r3")})});
  return e;
}

Allocation ex1_x() {
  Economy e = ex1_economy();
  return {{pair_of(e, "l2", "r3"), pair_of(e, "l3", "r1"), pair_of(e, "l1", "r2")}};
}

Allocation ex1_y() {
  Economy e = ex1_economy();
  return {{pair_of(e, "l3", "r1"), pair_of(e, "l2", "r3"), pair_of(e, "l1", "r2")}};
}

Economy ex2_economy() {
  Economy e = shoe_base();
  e.utilities.push_back({complete_table(
      6, {pair_of(e, "l1", "r2"), pair_of(e, "l3", "r1"), pair_of(e, "l1", "r1")})});
  e.utilities.push_back({complete_table(
      6, {pair_of(e, "l2", "r3"), pair_of(e, "l2", "r1"), pair_of(e, "l2", "r2")})});
  e.utilities.push_back({complete_table(
      6, {pair_of(e, "l1", "r3"), pair_of(e, "l3", "r2"), pair_of(e, "l3", "r3")})});
  return e;
}

Allocation ex2_x() {
  Economy e = ex2_economy();
  return {{pair_of(e, "l1", "r2"), pair_of(e, "l2", "r1"), pair_of(e, "l3", "r3")}};
}

Allocation ex2_y() {
  Economy e = ex2_economy();
  return {{pair_of(e, "l1", "r1"), pair_of(e, "l2", "r3"), pair_of(e, "l3", "r2")}};
}

Allocation ex2_z() {
  Economy e = ex2_economy();
  return {{pair_of(e, "l3", "r1"), pair_of(e, "l2", "r2"), pair_of(e, "l1", "r3")}};
}

Economy konishi_economy() {
  Economy e;
  e.objects = {"l1", "l2", "l3", "l4", "r1", "r2", "r3", "r4"};
  e.agents = {"1", "2", "3", "4"};
  for (int i = 0; i < 4; ++i) {
    Bundle w = Bundle::empty();
    w.add(i);
    w.add(4 + i);
    e.endowments.push_back(w);
  }
  // (v^l_i, v^r_i) per object, agents in columns
  const long long vl[4][4] = {{1, 0, 0, 3}, {3, 5, 0, 0}, {0, 0, 5, 2}, {0, 2, 5, 1}};
  const long long vr[4][4] = {{3, 2, 0, 0}, {5, 1, 2, 0}, {0, 3, 1, 5}, {0, 0, 3, 5}};
  for (int i = 0; i < 4; ++i) {
    TableUtility t;
    for (int left = -1; left < 4; ++left) {
      for (int right = -1; right < 4; ++right) {
        Bundle b = Bundle::empty();
        long long value = 0;
        if (left >= 0) {
          b.add(left);
          value += vl[i][left];
        }
        if (right >= 0) {
          b.add(4 + right);
          value += vr[i][right];
        }
        t.entries[b.bits] = ExtValue(Rational(value));
      }
    }
    t.fallback = ExtValue::neg_inf();  // two objects of one category
    e.utilities.push_back({t});
  }
  return e;
}

NTUGame roommate_game() {
  NTUGame g;
  g.agents = {"1", "2", "3"};
  auto mask = [](std::initializer_list<int> agents) {
    uint32_t m = 0;
    for (int a : agents) m |= uint32_t(1) << a;
    return m;
  };
  auto vec = [](std::initializer_list<long long> vals) {
    std::vector<ExtValue> v;
    for (long long x : vals) v.push_back(ExtValue(Rational(x)));
    return v;
  };
  g.generators[mask({0})] = {vec({0})};
  g.generators[mask({1})] = {vec({0})};
  g.generators[mask({2})] = {vec({0})};
  // pairing values: each agent ranks the others 2 > 1, living alone 0
  g.generators[mask({0, 1})] = {vec({2, 1}), vec({0, 0})};
  g.generators[mask({0, 2})] = {vec({1, 2}), vec({0, 0})};
  g.generators[mask({1, 2})] = {vec({2, 1}), vec({0, 0})};
  g.generators[mask({0, 1, 2})] = {vec({2, 1, 0}), vec({1, 0, 2}), vec({0, 2, 1}),
                                   vec({0, 0, 0})};
  return g;
}

Economy dtu_pair_economy() {
  Economy e;
  e.objects = {"a", "b", "c", "d"};
  e.agents = {"1", "2"};
  Bundle w1 = Bundle::empty(), w2 = Bundle::empty();
  w1.add(0);
  w1.add(1);
  w2.add(2);
  w2.add(3);
  e.endowments = {w1, w2};
  auto table = [&](std::initializer_list<std::pair<const char*, long long>> values) {
    TableUtility t;
    t.fallback = ExtValue::neg_inf();  // at most two objects are consumable
    t.entries[0] = ExtValue(Rational(0));
    for (const auto& [name, v] : values) {
      Bundle b = Bundle::empty();
      for (const char* p = name; *p; ++p) b.add(e.object_index(std::string(1, *p)));
      t.entries[b.bits] = ExtValue(Rational(v));
    }
    return t;
  };
  e.utilities.push_back({table({{"a", 6}, {"b", 5}, {"c", 4}, {"d", 3},
                                {"ad", 20}, {"ac", 19}, {"ab", 10}, {"bc", 9},
                                {"bd", 8}, {"cd", 7}})});
  e.utilities.push_back({table({{"d", 6}, {"c", 5}, {"b", 4}, {"a", 3},
                                {"bd", 20}, {"bc", 19}, {"cd", 10}, {"ad", 9},
                                {"ac", 8}, {"ab", 7}})});
  return e;
}

Economy dichotomous_chain_economy() {
  Economy e;
  e.objects = {"a", "b", "c"};
  e.agents = {"1", "2", "3"};
  e.endowments = {Bundle::single(0), Bundle::single(1), Bundle::single(2)};
  e.utilities.push_back({DichotomousUtility{Bundle::single(1)}});       // 1 wants b
  Bundle ac = Bundle::single(0) | Bundle::single(2);
  e.utilities.push_back({DichotomousUtility{ac}});                      // 2 wants a or c
  e.utilities.push_back({DichotomousUtility{Bundle::single(1)}});       // 3 wants b
  return e;
}

}  // namespace examples
}  // namespace dex
