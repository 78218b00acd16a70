#include "uavplan/mobility.hpp"

#include <algorithm>
#include <cmath>

#include "uavplan/errors.hpp"

namespace uavplan {

void draw_leg(GroundNode& node, const FarmScenario& farm, const MobilityBounds& bounds, Rng& rng) {
    node.waypoint = {uniform(rng, 0.0, farm.side_m), uniform(rng, 0.0, farm.side_m)};
    node.speed_mps = uniform(rng, bounds.v_min, bounds.v_max);
}

GroundNode step_node(GroundNode node, double dt_s, const FarmScenario& farm,
                     const MobilityBounds& bounds, Rng& rng) {
    if (node.pause_remaining_s > 0.0) {
        node.pause_remaining_s = std::max(0.0, node.pause_remaining_s - dt_s);
        return node;
    }
    const double reach = node.speed_mps * dt_s;
    const double d = dist(node.position, node.waypoint);
    if (d <= reach) {
        node.position = node.waypoint;
        node.pause_remaining_s = uniform(rng, bounds.pause_min, bounds.pause_max);
        draw_leg(node, farm, bounds, rng);
        return node;
    }
    const double f = reach / d;
    node.position.x += (node.waypoint.x - node.position.x) * f;
    node.position.y += (node.waypoint.y - node.position.y) * f;
    // guard against rounding just past the boundary
    node.position.x = std::clamp(node.position.x, 0.0, farm.side_m);
    node.position.y = std::clamp(node.position.y, 0.0, farm.side_m);
    return node;
}

std::vector<Rng> make_node_streams(std::uint64_t seed, std::size_t n) {
    std::vector<Rng> streams;
    streams.reserve(n);
    for (std::size_t i = 0; i < n; ++i) streams.emplace_back(substream_seed(seed, Stream::mobility, i));
    return streams;
}

std::vector<GroundNode> advance_all(std::vector<GroundNode> nodes, double duration_s, double dt_s,
                                    const FarmScenario& farm, const MobilityBounds& bounds,
                                    std::vector<Rng>& streams) {
    if (!(dt_s > 0.0)) throw ArgumentError("advance_all: dt_s must be > 0");
    if (duration_s < 0.0) throw ArgumentError("advance_all: negative duration");
    const double r = duration_s / dt_s;
    const double steps_d = std::round(r);
    if (std::abs(r - steps_d) > 1e-9 * std::max(1.0, r))
        throw ArgumentError("advance_all: duration is not a multiple of dt");
    if (streams.size() != nodes.size())
        throw ArgumentError("advance_all: need one rng stream per node");
    const auto steps = static_cast<long long>(steps_d);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (long long s = 0; s < steps; ++s)
            nodes[i] = step_node(std::move(nodes[i]), dt_s, farm, bounds, streams[i]);
    return nodes;
}

}  // namespace uavplan
