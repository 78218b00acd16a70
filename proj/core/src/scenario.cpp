#include "uavplan/scenario.hpp"

#include <cmath>
#include <numbers>

#include "uavplan/errors.hpp"
#include "uavplan/mobility.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

std::vector<ServiceShare> default_service_mix() {
    return {
        {{"gps-tracking", 1, 4000.0, 1.0}, 0.7},
        {{"health-telemetry", 2, 16000.0, 0.5}, 0.3},
    };
}

std::vector<Vec3> FarmScenario::neighbor_bs() const {
    std::vector<Vec3> ring;
    if (!neighbor_tier_enabled) return ring;
    const double r = side_m / 2.0 + neighbor_tier_distance_m;
    for (int i = 0; i < 6; ++i) {
        const double a = i * std::numbers::pi / 3.0;
        ring.push_back({bs_position.x + r * std::cos(a), bs_position.y + r * std::sin(a), bs_height_m});
    }
    return ring;
}

void validate(const FarmScenario& s) {
    if (!(s.side_m > 0.0)) throw ValidationError("scenario.side_m", "must be > 0");
    if (!s.contains(s.bs_position))
        throw ValidationError("scenario.bs_position", "must lie inside the farm square");
    if (!(s.bs_height_m > 0.0)) throw ValidationError("scenario.bs_height_m", "must be > 0");
    if (s.n_nodes < 1) throw ValidationError("scenario.n_nodes", "must be >= 1");
    if (s.service_mix.empty()) throw ValidationError("scenario.service_mix", "must not be empty");
    double total = 0.0;
    for (const auto& share : s.service_mix) {
        const auto& c = share.service;
        if (c.rb_demand < 1) throw ValidationError("scenario.service_mix.rb_demand", "must be >= 1");
        if (!(c.deadline_s > 0.0))
            throw ValidationError("scenario.service_mix.deadline_s", "must be > 0");
        if (!(c.packet_bits > 0.0))
            throw ValidationError("scenario.service_mix.packet_bits", "must be > 0");
        if (!(share.fraction >= 0.0))
            throw ValidationError("scenario.service_mix.fraction", "must be >= 0");
        total += share.fraction;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ValidationError("scenario.service_mix.fraction", "fractions must sum to 1");
    if (s.neighbor_tier_enabled && !(s.neighbor_tier_distance_m > 0.0))
        throw ValidationError("scenario.neighbor_tier_distance_m", "must be > 0");
}

void validate(const MobilityBounds& b) {
    if (!(b.v_min > 0.0)) throw ValidationError("mobility.v_min", "must be > 0");
    if (!(b.v_max >= b.v_min)) throw ValidationError("mobility.v_max", "must be >= v_min");
    if (!(b.pause_min >= 0.0)) throw ValidationError("mobility.pause_min", "must be >= 0");
    if (!(b.pause_max >= b.pause_min))
        throw ValidationError("mobility.pause_max", "must be >= pause_min");
}

namespace {

bool is_multiple(double a, double b) {
    const double r = a / b;
    return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

}  // namespace

void validate(const SimConfig& c) {
    validate(c.scenario);
    validate(c.radio);
    validate(c.mobility);
    if (!(c.dt_s > 0.0)) throw ValidationError("sim.dt_s", "must be > 0");
    if (!(c.recluster_period_s >= c.dt_s))
        throw ValidationError("sim.recluster_period_s", "must be >= dt_s");
    if (!is_multiple(c.recluster_period_s, c.dt_s))
        throw ValidationError("sim.recluster_period_s", "must be a multiple of dt_s");
    if (!(c.horizon_s >= c.recluster_period_s))
        throw ValidationError("sim.horizon_s", "must be >= recluster_period_s");
    if (!(c.coverage_target > 0.0 && c.coverage_target <= 1.0))
        throw ValidationError("sim.coverage_target", "must lie in (0, 1]");
    if (c.k_max < 1) throw ValidationError("sim.k_max", "must be >= 1");
    if (c.n_replications < 1) throw ValidationError("sim.n_replications", "must be >= 1");
    if (c.threads < 0) throw ValidationError("sim.threads", "must be >= 0");
    if (c.clustering.n_init < 1) throw ValidationError("clustering.n_init", "must be >= 1");
    if (c.clustering.max_iter < 1) throw ValidationError("clustering.max_iter", "must be >= 1");
    if (!(c.clustering.tol_m >= 0.0)) throw ValidationError("clustering.tol_m", "must be >= 0");
    if (!(c.clustering.crp_a > 0.0)) throw ValidationError("clustering.crp_a", "must be > 0");
    if (c.clustering.crp_lambda_m && !(*c.clustering.crp_lambda_m > 0.0))
        throw ValidationError("clustering.crp_lambda_m", "must be > 0");
    if (c.planner.cqi_min < 0 || c.planner.cqi_min >= kCqiLevels)
        throw ValidationError("planner.cqi_min", "must lie in [0, 14]");
    if (!(c.planner.backhaul_bw_hz > 0.0))
        throw ValidationError("planner.backhaul_bw_hz", "must be > 0");
    if (c.grid.farm_sides_m.empty()) throw ValidationError("grid.farm_sides_m", "must not be empty");
    for (double s : c.grid.farm_sides_m)
        if (!(s > 0.0)) throw ValidationError("grid.farm_sides_m", "sides must be > 0");
    if (c.grid.node_counts.empty()) throw ValidationError("grid.node_counts", "must not be empty");
    for (int n : c.grid.node_counts)
        if (n < 1) throw ValidationError("grid.node_counts", "counts must be >= 1");
    if (c.grid.elbow_k_max < 1) throw ValidationError("grid.elbow_k_max", "must be >= 1");
    if (c.direction_interval_deg &&
        !((*c.direction_interval_deg)[0] <= (*c.direction_interval_deg)[1]))
        throw ValidationError("mobility.direction_interval_deg", "lower bound above upper bound");
}

std::string farm_label(double side_m) {
    if (side_m == 1000.0) return "small";
    if (side_m == 2000.0) return "medium";
    if (side_m == 5000.0) return "large";
    return "side" + std::to_string(static_cast<long long>(std::llround(side_m))) + "m";
}

std::string scenario_id(const FarmScenario& s) {
    return farm_label(s.side_m) + "-" + std::to_string(s.n_nodes);
}

SimConfig with_scenario(const SimConfig& base, double side_m, int n_nodes) {
    SimConfig c = base;
    const double scale = side_m / base.scenario.side_m;
    c.scenario.side_m = side_m;
    c.scenario.bs_position = {base.scenario.bs_position.x * scale, base.scenario.bs_position.y * scale};
    c.scenario.n_nodes = n_nodes;
    return c;
}

SimConfig scenario_by_name(const SimConfig& base, const std::string& name) {
    for (double side : base.grid.farm_sides_m)
        for (int n : base.grid.node_counts) {
            SimConfig c = with_scenario(base, side, n);
            if (scenario_id(c.scenario) == name) return c;
        }
    throw ArgumentError("unknown scenario '" + name + "' (expected e.g. small-100)");
}

std::vector<GroundNode> generate_nodes(const SimConfig& config, std::uint64_t seed) {
    const auto& farm = config.scenario;
    Rng rng(substream_seed(seed, Stream::population, 0));
    std::vector<GroundNode> nodes;
    nodes.reserve(static_cast<std::size_t>(farm.n_nodes));
    for (int i = 0; i < farm.n_nodes; ++i) {
        GroundNode n;
        n.id = i;
        n.position = {uniform(rng, 0.0, farm.side_m), uniform(rng, 0.0, farm.side_m)};
        n.height_m = config.radio.node_height_m;
        const double u = uniform01(rng);
        double cum = 0.0;
        n.service = farm.service_mix.back().service;
        for (const auto& share : farm.service_mix) {
            cum += share.fraction;
            if (u < cum) {
                n.service = share.service;
                break;
            }
        }
        draw_leg(n, farm, config.mobility, rng);
        nodes.push_back(std::move(n));
    }
    return nodes;
}

}  // namespace uavplan
