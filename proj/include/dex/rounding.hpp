#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dex/ntu.hpp"
#include "dex/oracle.hpp"

namespace dex {

// Exact-rational fractional assignment matrix. Rows start out one per agent
// and may split during categorical preprocessing; `agent` names the original
// owner of each row (the row-split map).
struct FractionalMatrix {
  enum class Mode { kDichotomous, kCategorical };

  Mode mode = Mode::kDichotomous;
  std::vector<std::string> objects;        // column names
  std::vector<int> category_index;         // per column; -1 in dichotomous mode
  std::vector<std::string> category_names;

  struct Row {
    std::string agent;
    long long target = 0;
    std::vector<Rational> entries;
  };
  std::vector<Row> rows;

  int num_cols() const { return int(objects.size()); }
  long long fractional_count() const;
};

// Per-pass bookkeeping for the rounding invariants: fractional counts must
// fall strictly in dichotomous mode and never rise in categorical mode, and
// the matrix properties must survive every step.
struct RoundingTrace {
  struct Pass {
    std::string move;
    long long fractional_before = 0;
    long long fractional_after = 0;
  };
  std::vector<Pass> passes;
  long long initial_fractional = 0;
  int splits = 0;
  int rounding_passes = 0;
};

// t_i = ceil(u_i); -inf is rejected.
std::vector<long long> targets_from_profile(const UtilityProfile& u);

// P = sum of delta_S * P_S over the collection, with witness bundles
// restricted to each agent's acceptable objects. Every witness must meet its
// coalition members' targets.
FractionalMatrix build_matrix(const Economy& e, const BalancedCollection& bc,
                              const std::map<uint32_t, std::vector<Bundle>>& witnesses,
                              const std::vector<long long>& targets);

// The three-move reduction: lone column entries rise to one, two-entry
// shifts move mass toward deficient rows, and even alternating cycles of
// fractional entries shift by the largest feasible epsilon. Stops once every
// row holds its target in ones; residual fractions are dropped.
FractionalMatrix round_dichotomous(const FractionalMatrix& m,
                                   RoundingTrace* trace = nullptr);

struct RoundOutcome {
  std::map<std::string, std::vector<std::string>> assigned;  // agent -> objects
  RoundingTrace trace;
};

// Alternates the four preprocessing moves (split bound categories, drop
// spent rows, promote lone column entries, bank ones) with cycle rounding
// until the matrix empties. Throws InvariantError when a matrix property
// breaks or the pass bound |P| + |A|(K-1) is exceeded.
RoundOutcome round_categorical(const FractionalMatrix& m);

Allocation allocation_from_integral(const Economy& e, const FractionalMatrix& m);
Allocation allocation_from_outcome(const Economy& e, const RoundOutcome& out);

FractionalMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const FractionalMatrix& m);
FractionalMatrix load_matrix(const std::string& path);

}  // namespace dex
