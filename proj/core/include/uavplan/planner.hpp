#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "uavplan/clustering.hpp"
#include "uavplan/radio.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

struct UavBs {
    int id = 0;
    Vec3 position;
    double tx_dbm = 0.0;
    int capacity_rb = 0;
};

std::vector<UavBs> place_uavs(const Assignment& a, const RadioParams& radio);

// One node's claim on its UAV.
struct AllocationRequest {
    int rb_demand = 1;
    double packet_bits = 0.0;
    double deadline_s = 1.0;
    double sinr_db = 0.0;
    int cqi = 0;
};

struct AllocationContext {
    int rb_budget = 0;
    double rb_bw_hz = 180e3;
    int cqi_min = 1;
    // Relay rate available for admitted load; infinite when not gated.
    double backhaul_capacity_bps = std::numeric_limits<double>::infinity();
};

struct Allocation {
    int rb_allocated = 0;
    double latency_s = std::numeric_limits<double>::infinity();
    bool served = false;
};

// Requests are visited by descending SINR (ties by input order). A request
// is granted its full RB demand if it fits what is left of the RB budget and
// its offered load fits the remaining backhaul; otherwise it gets nothing and
// the next one is tried. Served iff granted, latency <= deadline and
// cqi >= cqi_min. Results come back in input order.
std::vector<Allocation> allocate_resources(std::span<const AllocationRequest> requests,
                                           const AllocationContext& ctx);

struct NodeRecord {
    int node_id = 0;
    int serving_uav = 0;
    double sinr_db = 0.0;
    int cqi = 0;
    int rb_allocated = 0;
    double achieved_latency_s = 0.0;
    bool served = false;
};

struct BackhaulRecord {
    int uav_id = 0;
    LinkBudget link;
    double rate_bps = 0.0;
    double admitted_load_bps = 0.0;
    int rb_used = 0;
};

struct DeploymentEval {
    int k = 0;
    Assignment assignment;
    std::vector<UavBs> uavs;
    std::vector<NodeRecord> per_node;
    std::vector<LinkBudget> access;  // serving link per node
    std::vector<BackhaulRecord> backhaul;
    int n_served = 0;
    double total_latency_s = 0.0;
    bool separation_ok = true;
    std::vector<std::pair<int, int>> separation_violations;
    bool feasible = false;
    double efficiency = 0.0;

    std::vector<int> cqi_histogram() const;  // kCqiLevels bins
};

// Runs the radio and allocation stages for a given clustering.
DeploymentEval evaluate_assignment(std::span<const GroundNode> nodes, Assignment assignment,
                                   const SimConfig& config);

DeploymentEval evaluate_deployment(std::span<const GroundNode> nodes, int k, const SimConfig& config,
                                   std::uint64_t seed);

struct UavCountSelection {
    int k_star = 0;
    int k_min = 1;  // first evaluated k
    bool feasible = false;
    std::vector<DeploymentEval> evals;  // k = k_min, k_min + 1, ... in order

    const DeploymentEval& chosen() const { return evals.at(static_cast<std::size_t>(k_star - k_min)); }
};

// Smallest k whose RB budget can cover the coverage target with the cheapest
// nodes; every smaller k is infeasible.
int rb_lower_bound(std::span<const GroundNode> nodes, const SimConfig& config);

// Sweeps k upward from rb_lower_bound (from 1 with full_sweep) and stops at the
// first feasible k unless full_sweep is set. Without a feasible k, every k is
// evaluated and the one serving most nodes wins (lowest k on ties).
UavCountSelection select_uav_count(std::span<const GroundNode> nodes, const SimConfig& config,
                                   std::uint64_t seed, bool full_sweep = false);

DeploymentEval evaluate_crp_deployment(std::span<const GroundNode> nodes, const SimConfig& config,
                                       std::uint64_t seed);

struct EfficiencyRatio {
    double value = 0.0;
    bool infinite = false;
};

EfficiencyRatio efficiency_ratio(const DeploymentEval& p, const DeploymentEval& crp);

std::vector<Vec2> positions(std::span<const GroundNode> nodes);

// node_id,serving_uav,x_m,y_m,service,sinr_db,cqi,rb_allocated,latency_s,served
void write_deployment_csv(std::ostream& out, std::span<const GroundNode> nodes, const DeploymentEval& e);
// Summary document for one k.
void write_deployment_json(std::ostream& out, const DeploymentEval& e, double coverage_target);
// One row per node-UAV pair plus one per node-neighbour-BS pair.
void write_link_trace_csv(std::ostream& out, std::span<const GroundNode> nodes, const DeploymentEval& e,
                          const SimConfig& config);

}  // namespace uavplan
