#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/geometry.hpp"
#include "uavplan/radio.hpp"

namespace uavplan {

struct ServiceClass {
    std::string name;
    int rb_demand = 1;
    double packet_bits = 4000.0;
    double deadline_s = 1.0;

    // Rate the node's reports put on the relay when it meets its deadline.
    double offered_load_bps() const { return packet_bits / deadline_s; }
    bool operator==(const ServiceClass&) const = default;
};

struct ServiceShare {
    ServiceClass service;
    double fraction = 0.0;
    bool operator==(const ServiceShare&) const = default;
};

std::vector<ServiceShare> default_service_mix();

struct FarmScenario {
    double side_m = 1000.0;
    Vec2 bs_position{500.0, 500.0};
    double bs_height_m = 100.0;
    int n_nodes = 100;
    std::vector<ServiceShare> service_mix = default_service_mix();
    // Ring of six co-channel BSs around bs_position. The distance is measured
    // from the farm edge, so the ring radius is side_m / 2 + this value.
    bool neighbor_tier_enabled = true;
    double neighbor_tier_distance_m = 4000.0;

    Vec3 bs() const { return lift(bs_position, bs_height_m); }
    std::vector<Vec3> neighbor_bs() const;  // empty when disabled
    bool contains(const Vec2& p) const {
        return p.x >= 0.0 && p.x <= side_m && p.y >= 0.0 && p.y <= side_m;
    }
    bool operator==(const FarmScenario&) const = default;
};

void validate(const FarmScenario& s);

struct GroundNode {
    int id = 0;
    Vec2 position;
    double height_m = 1.5;
    Vec2 waypoint;
    double speed_mps = 0.0;
    double pause_remaining_s = 0.0;
    ServiceClass service;
    bool operator==(const GroundNode&) const = default;
};

struct MobilityBounds {
    double v_min = 1.0;
    double v_max = 3.0;
    double pause_min = 0.0;
    double pause_max = 1.0;
    bool operator==(const MobilityBounds&) const = default;
};

void validate(const MobilityBounds& b);

struct ClusteringParams {
    int n_init = 10;
    int max_iter = 100;
    double tol_m = 1e-6;
    double crp_a = 2.0;
    // Distance decay of the CRP kernel; empty means one farm side.
    std::optional<double> crp_lambda_m;

    double crp_lambda(double side_m) const { return crp_lambda_m ? *crp_lambda_m : side_m; }
    bool operator==(const ClusteringParams&) const = default;
};

struct PlannerParams {
    int cqi_min = 1;
    // A UAV only admits nodes whose offered load fits its relay rate
    // backhaul_bw_hz * log2(1 + backhaul SINR).
    bool backhaul_gating = true;
    double backhaul_bw_hz = 290e3;
    bool operator==(const PlannerParams&) const = default;
};

struct GridSpec {
    std::vector<double> farm_sides_m{1000.0, 2000.0, 5000.0};
    std::vector<int> node_counts{50, 100, 200, 500, 800, 1000};
    int elbow_k_max = 24;
    bool operator==(const GridSpec&) const = default;
};

struct SimConfig {
    FarmScenario scenario;
    RadioParams radio;
    MobilityBounds mobility;
    // Accepted for compatibility with direction-based mobility, not used.
    std::optional<std::array<double, 2>> direction_interval_deg;
    double dt_s = 1.0;
    double horizon_s = 600.0;
    double recluster_period_s = 30.0;
    int k_max = 30;
    double coverage_target = 0.95;
    int n_replications = 30;
    std::uint64_t master_seed = 20220801;
    ClusteringParams clustering;
    PlannerParams planner;
    GridSpec grid;
    // Worker threads for replications; 0 means hardware concurrency.
    int threads = 0;

    bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& c);  // throws ValidationError naming the field

// Farm label used in scenario ids: small/medium/large for 1/2/5 km.
std::string farm_label(double side_m);
std::string scenario_id(const FarmScenario& s);

// Copy of base with a different farm side and population; the BS keeps its
// relative position on the farm.
SimConfig with_scenario(const SimConfig& base, double side_m, int n_nodes);

// Finds "small-100" style ids in the grid; throws ArgumentError if unknown.
SimConfig scenario_by_name(const SimConfig& base, const std::string& name);

std::vector<GroundNode> generate_nodes(const SimConfig& config, std::uint64_t seed);

}  // namespace uavplan
