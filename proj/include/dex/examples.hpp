#pragma once

#include "dex/economy.hpp"
#include "dex/ntu.hpp"
#include "dex/oracle.hpp"

namespace dex {
namespace examples {

// Three-agent shoe economy where the strong core is {X} while the weak core
// also holds Y: blocking Y with X needs agent 3's permission, which a weak
// block grants through indifference.
Economy ex1_economy();
Allocation ex1_x();
Allocation ex1_y();

// Three-agent shoe economy with an empty weak core: X, Y, Z block cyclically.
Economy ex2_economy();
Allocation ex2_x();
Allocation ex2_y();
Allocation ex2_z();

// Four-agent two-category economy with additively separable cardinal
// utilities and an empty weak core.
Economy konishi_economy();

// The three-agent roommate problem as an NTU game; its weak core is empty.
NTUGame roommate_game();

// Two-agent paired-consumption economy satisfying discrete transferable
// utility whose T^2 fixed point leaves both agents below their T-image:
// exercises the cycle pairing on a real two-cycle.
Economy dtu_pair_economy();

// Three agents with a shared-middle acceptability chain; its game is
// balanced but not ordinally convex.
Economy dichotomous_chain_economy();

}  // namespace examples
}  // namespace dex
