#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "uavplan/errors.hpp"
#include "uavplan/mobility.hpp"

using namespace uavplan;

namespace {

GroundNode walker(Vec2 pos, Vec2 wp, double speed) {
    GroundNode n;
    n.position = pos;
    n.waypoint = wp;
    n.speed_mps = speed;
    return n;
}

}  // namespace

TEST(StepNode, StraightLine) {
    FarmScenario farm;
    MobilityBounds b;
    Rng rng(1);
    const auto n = step_node(walker({0, 0}, {10, 0}, 2), 1.0, farm, b, rng);
    EXPECT_DOUBLE_EQ(n.position.x, 2.0);
    EXPECT_DOUBLE_EQ(n.position.y, 0.0);
    EXPECT_EQ(n.waypoint, (Vec2{10, 0}));
}

TEST(StepNode, ArrivalClamp) {
    FarmScenario farm;
    MobilityBounds b;
    Rng rng(1);
    const auto n = step_node(walker({9.5, 0}, {10, 0}, 2), 1.0, farm, b, rng);
    EXPECT_EQ(n.position, (Vec2{10, 0}));
    EXPECT_GE(n.pause_remaining_s, 0.0);
    EXPECT_LE(n.pause_remaining_s, 1.0);
    EXPECT_NE(n.waypoint, (Vec2{10, 0}));
    EXPECT_TRUE(farm.contains(n.waypoint));
    EXPECT_GE(n.speed_mps, 1.0);
    EXPECT_LE(n.speed_mps, 3.0);
}

TEST(StepNode, PauseHoldsPosition) {
    FarmScenario farm;
    MobilityBounds b;
    Rng rng(1);
    auto w = walker({5, 5}, {50, 5}, 2);
    w.pause_remaining_s = 0.7;
    const auto n = step_node(w, 0.5, farm, b, rng);
    EXPECT_EQ(n.position, (Vec2{5, 5}));
    EXPECT_NEAR(n.pause_remaining_s, 0.2, 1e-12);
}

TEST(StepNode, LongWalkStaysOnFarmWithExactDisplacement) {
    FarmScenario farm;
    MobilityBounds b;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        GroundNode n = walker({500, 500}, {0, 1000}, 2.0);
        for (int s = 0; s < 10000; ++s) {
            const GroundNode prev = n;
            n = step_node(n, 1.0, farm, b, rng);
            ASSERT_TRUE(farm.contains(n.position));
            ASSERT_TRUE(farm.contains(n.waypoint));
            const double moved = dist(prev.position, n.position);
            if (prev.pause_remaining_s > 0.0) {
                ASSERT_EQ(moved, 0.0);
            } else if (n.position == prev.waypoint) {
                ASSERT_LE(moved, prev.speed_mps + 1e-9);  // arrival step
            } else {
                ASSERT_NEAR(moved, prev.speed_mps, 1e-9);
            }
            ASSERT_GE(n.speed_mps, 1.0);
            ASSERT_LE(n.speed_mps, 3.0);
            ASSERT_GE(n.pause_remaining_s, 0.0);
            ASSERT_LE(n.pause_remaining_s, 1.0);
        }
    }
}

TEST(AdvanceAll, ZeroDurationIsIdentity) {
    SimConfig c;
    auto nodes = generate_nodes(c, 3);
    auto streams = make_node_streams(3, nodes.size());
    EXPECT_EQ(advance_all(nodes, 0.0, 1.0, c.scenario, c.mobility, streams), nodes);
}

TEST(AdvanceAll, AppliesOneStepPerDt) {
    SimConfig c;
    const auto nodes = generate_nodes(c, 4);
    auto s1 = make_node_streams(4, nodes.size());
    auto s2 = make_node_streams(4, nodes.size());
    const auto bulk = advance_all(nodes, 30.0, 1.0, c.scenario, c.mobility, s1);
    auto manual = nodes;
    for (std::size_t i = 0; i < manual.size(); ++i)
        for (int s = 0; s < 30; ++s) manual[i] = step_node(manual[i], 1.0, c.scenario, c.mobility, s2[i]);
    EXPECT_EQ(bulk, manual);
}

TEST(AdvanceAll, DeterministicAndOrderIndependent) {
    SimConfig c;
    const auto nodes = generate_nodes(c, 5);
    auto s1 = make_node_streams(5, nodes.size());
    auto s2 = make_node_streams(5, nodes.size());
    EXPECT_EQ(advance_all(nodes, 60, 1, c.scenario, c.mobility, s1), advance_all(nodes, 60, 1, c.scenario, c.mobility, s2));

    // reversing node order (with their streams) reverses the result
    auto rev = nodes;
    std::reverse(rev.begin(), rev.end());
    auto sf = make_node_streams(5, nodes.size());
    auto sr = sf;
    std::reverse(sr.begin(), sr.end());
    auto fwd = advance_all(nodes, 45, 1, c.scenario, c.mobility, sf);
    auto back = advance_all(rev, 45, 1, c.scenario, c.mobility, sr);
    std::reverse(back.begin(), back.end());
    EXPECT_EQ(fwd, back);
}

TEST(AdvanceAll, RejectsNonMultipleDuration) {
    SimConfig c;
    auto nodes = generate_nodes(c, 6);
    auto streams = make_node_streams(6, nodes.size());
    EXPECT_THROW(advance_all(nodes, 2.5, 1.0, c.scenario, c.mobility, streams), ArgumentError);
    std::vector<Rng> short_streams(2);
    EXPECT_THROW(advance_all(nodes, 2.0, 1.0, c.scenario, c.mobility, short_streams), ArgumentError);
}

TEST(AdvanceAll, SampledSpeedsAndPausesWithinBounds) {
    SimConfig c;
    c.scenario.n_nodes = 300;
    auto nodes = generate_nodes(c, 8);
    auto streams = make_node_streams(8, nodes.size());
    double vmin = 10, vmax = 0, pmax = 0;
    for (int e = 0; e < 20; ++e) {
        nodes = advance_all(nodes, 30, 1, c.scenario, c.mobility, streams);
        for (const auto& n : nodes) {
            vmin = std::min(vmin, n.speed_mps);
            vmax = std::max(vmax, n.speed_mps);
            pmax = std::max(pmax, n.pause_remaining_s);
            ASSERT_TRUE(c.scenario.contains(n.position));
        }
    }
    EXPECT_GE(vmin, 1.0);
    EXPECT_LE(vmax, 3.0);
    EXPECT_LE(pmax, 1.0);
}
