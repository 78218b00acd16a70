#pragma once

#include <cstdint>
#include <vector>

#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

// Draws a fresh waypoint uniformly over the farm and a speed in [v_min, v_max].
void draw_leg(GroundNode& node, const FarmScenario& farm, const MobilityBounds& bounds, Rng& rng);

// One Random Waypoint step. A pausing node only burns pause time; a moving
// node that can reach its waypoint within speed*dt lands exactly on it, then
// draws a pause and its next leg.
GroundNode step_node(GroundNode node, double dt_s, const FarmScenario& farm,
                     const MobilityBounds& bounds, Rng& rng);

// One independent stream per node, so results do not depend on node order.
std::vector<Rng> make_node_streams(std::uint64_t seed, std::size_t n);

std::vector<GroundNode> advance_all(std::vector<GroundNode> nodes, double duration_s, double dt_s,
                                    const FarmScenario& farm, const MobilityBounds& bounds,
                                    std::vector<Rng>& streams);

}  // namespace uavplan
