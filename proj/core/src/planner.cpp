#include "uavplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "uavplan/errors.hpp"
#include "uavplan/format.hpp"

namespace uavplan {

std::vector<UavBs> place_uavs(const Assignment& a, const RadioParams& radio) {
    std::vector<UavBs> uavs;
    uavs.reserve(a.centroids.size());
    for (std::size_t j = 0; j < a.centroids.size(); ++j)
        uavs.push_back({static_cast<int>(j), lift(a.centroids[j], radio.uav_height_m), radio.uav_tx_dbm,
                        radio.rb_budget()});
    return uavs;
}

std::vector<Allocation> allocate_resources(std::span<const AllocationRequest> requests,
                                           const AllocationContext& ctx) {
    std::vector<std::size_t> order(requests.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return requests[a].sinr_db > requests[b].sinr_db;
    });
    std::vector<Allocation> out(requests.size());
    int rb_left = ctx.rb_budget;
    double bh_left = ctx.backhaul_capacity_bps;
    for (std::size_t i : order) {
        const auto& r = requests[i];
        const double load = r.packet_bits / r.deadline_s;
        if (r.rb_demand > rb_left || load > bh_left) continue;
        rb_left -= r.rb_demand;
        bh_left -= load;
        auto& a = out[i];
        a.rb_allocated = r.rb_demand;
        const double rate = shannon_throughput(r.rb_demand * ctx.rb_bw_hz, db_to_linear(r.sinr_db));
        a.latency_s = rate > 0.0 ? r.packet_bits / rate : std::numeric_limits<double>::infinity();
        a.served = a.latency_s <= r.deadline_s && r.cqi >= ctx.cqi_min;
    }
    return out;
}

std::vector<int> DeploymentEval::cqi_histogram() const {
    std::vector<int> h(kCqiLevels, 0);
    for (const auto& r : per_node) ++h[static_cast<std::size_t>(r.cqi)];
    return h;
}

std::vector<Vec2> positions(std::span<const GroundNode> nodes) {
    std::vector<Vec2> p;
    p.reserve(nodes.size());
    for (const auto& n : nodes) p.push_back(n.position);
    return p;
}

DeploymentEval evaluate_assignment(std::span<const GroundNode> nodes, Assignment assignment,
                                   const SimConfig& config) {
    const auto& radio = config.radio;
    const auto& farm = config.scenario;
    if (assignment.labels.size() != nodes.size())
        throw ArgumentError("evaluate_assignment: assignment does not match node list");
    DeploymentEval e;
    e.k = assignment.k;
    e.uavs = place_uavs(assignment, radio);
    const auto k = static_cast<std::size_t>(e.k);
    const std::vector<Vec3> tier = farm.neighbor_bs();
    const double noise_rb = noise_power_dbm(radio.rb_bw_hz, radio.noise_figure_db);
    const double g = radio.antenna_gain_db;

    // access links
    e.access.resize(nodes.size());
    std::vector<double> pl(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Vec3 rx = lift(nodes[i].position, nodes[i].height_m);
        const HataModel from_uav(radio.f_mhz, radio.uav_height_m, rx.z);
        const auto serving = static_cast<std::size_t>(assignment.labels[i]);
        double uav_i = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            pl[j] = from_uav.loss_db(dist(e.uavs[j].position, rx));
            if (j != serving) uav_i += db_to_linear(radio.uav_tx_dbm + g - pl[j]);
        }
        double bs_i = 0.0;
        if (!tier.empty()) {
            const HataModel from_bs(radio.f_mhz, farm.bs_height_m, rx.z);
            for (const auto& b : tier) bs_i += db_to_linear(radio.bs_tx_dbm + g - from_bs.loss_db(dist(b, rx)));
        }
        e.access[i] = compose_link(radio.uav_tx_dbm, g, pl[serving], uav_i, bs_i, noise_rb, radio.cqi_thresholds_db);
    }

    // relay links
    std::vector<Vec3> others;
    e.backhaul.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        others.clear();
        for (std::size_t m = 0; m < k; ++m)
            if (m != j) others.push_back(e.uavs[m].position);
        auto& b = e.backhaul[j];
        b.uav_id = static_cast<int>(j);
        b.link = backhaul_sinr(e.uavs[j].position, farm.bs(), tier, others, radio);
        b.rate_bps = shannon_throughput(config.planner.backhaul_bw_hz, b.link.sinr_linear());
    }

    // per-cluster allocation
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < nodes.size(); ++i) members[static_cast<std::size_t>(assignment.labels[i])].push_back(i);
    e.per_node.resize(nodes.size());
    std::vector<AllocationRequest> req;
    for (std::size_t j = 0; j < k; ++j) {
        req.clear();
        for (std::size_t i : members[j]) {
            const auto& s = nodes[i].service;
            req.push_back({s.rb_demand, s.packet_bits, s.deadline_s, e.access[i].sinr_db, e.access[i].cqi});
        }
        AllocationContext ctx{radio.rb_budget(), radio.rb_bw_hz, config.planner.cqi_min,
                              config.planner.backhaul_gating ? e.backhaul[j].rate_bps
                                                             : std::numeric_limits<double>::infinity()};
        const auto alloc = allocate_resources(req, ctx);
        for (std::size_t m = 0; m < members[j].size(); ++m) {
            const std::size_t i = members[j][m];
            const auto& a = alloc[m];
            e.per_node[i] = {nodes[i].id, static_cast<int>(j), e.access[i].sinr_db, e.access[i].cqi,
                             a.rb_allocated, a.latency_s, a.served};
            e.backhaul[j].rb_used += a.rb_allocated;
            if (a.rb_allocated > 0) e.backhaul[j].admitted_load_bps += nodes[i].service.offered_load_bps();
            if (a.served) {
                ++e.n_served;
                e.total_latency_s += a.latency_s;
            }
        }
    }

    auto sep = check_separation(assignment, radio.d_min_separation_m);
    e.separation_ok = sep.ok;
    e.separation_violations = std::move(sep.violations);
    const double n = static_cast<double>(nodes.size());
    e.feasible = e.separation_ok && e.n_served >= config.coverage_target * n - 1e-9;
    e.efficiency = static_cast<double>(e.n_served) / static_cast<double>(e.k);
    e.assignment = std::move(assignment);
    return e;
}

namespace {

KMeansOptions kmeans_options(const SimConfig& c) {
    return {c.clustering.n_init, c.clustering.max_iter, c.clustering.tol_m};
}

}  // namespace

DeploymentEval evaluate_deployment(std::span<const GroundNode> nodes, int k, const SimConfig& config,
                                   std::uint64_t seed) {
    if (k < 1 || k > config.k_max) throw ArgumentError("evaluate_deployment: k outside [1, k_max]");
    const auto pts = positions(nodes);
    Assignment a = kmeans_restarts(pts, k, substream_seed(seed, Stream::kmeans, static_cast<std::uint64_t>(k)),
                                   kmeans_options(config))
                       .best;
    return evaluate_assignment(nodes, std::move(a), config);
}

int rb_lower_bound(std::span<const GroundNode> nodes, const SimConfig& config) {
    std::vector<int> demand;
    demand.reserve(nodes.size());
    for (const auto& n : nodes) demand.push_back(n.service.rb_demand);
    std::sort(demand.begin(), demand.end());
    const double need = std::ceil(config.coverage_target * static_cast<double>(nodes.size()) - 1e-9);
    long long rb = 0;
    for (std::size_t i = 0; i < demand.size() && static_cast<double>(i) < need; ++i) rb += demand[i];
    const long long budget = config.radio.rb_budget();
    return std::max(1, static_cast<int>((rb + budget - 1) / budget));
}

UavCountSelection select_uav_count(std::span<const GroundNode> nodes, const SimConfig& config,
                                   std::uint64_t seed, bool full_sweep) {
    UavCountSelection sel;
    const auto pts = positions(nodes);
    const int k_hi = std::min<int>(config.k_max, static_cast<int>(count_distinct(pts)));
    sel.k_min = full_sweep ? 1 : std::min(rb_lower_bound(nodes, config), std::max(k_hi, 1));
    int best_k = 0, best_served = -1;
    for (int k = sel.k_min; k <= k_hi; ++k) {
        sel.evals.push_back(evaluate_deployment(nodes, k, config, seed));
        const auto& e = sel.evals.back();
        if (e.n_served > best_served) {
            best_served = e.n_served;
            best_k = k;
        }
        if (e.feasible && !sel.feasible) {
            sel.feasible = true;
            sel.k_star = k;
            if (!full_sweep) break;
        }
    }
    if (!sel.feasible && sel.k_min > 1) {
        // fallback ranks every k, so fill in the ones skipped by the bound
        std::vector<DeploymentEval> all;
        for (int k = 1; k < sel.k_min; ++k) all.push_back(evaluate_deployment(nodes, k, config, seed));
        std::move(sel.evals.begin(), sel.evals.end(), std::back_inserter(all));
        sel.evals = std::move(all);
        sel.k_min = 1;
        best_served = -1;
        for (const auto& e : sel.evals)
            if (e.n_served > best_served) {
                best_served = e.n_served;
                best_k = e.k;
            }
    }
    if (!sel.feasible) sel.k_star = best_k;
    return sel;
}

DeploymentEval evaluate_crp_deployment(std::span<const GroundNode> nodes, const SimConfig& config,
                                       std::uint64_t seed) {
    const CrpParams params{config.clustering.crp_a, config.clustering.crp_lambda(config.scenario.side_m)};
    return evaluate_assignment(nodes, crp_cluster(positions(nodes), params, seed), config);
}

EfficiencyRatio efficiency_ratio(const DeploymentEval& p, const DeploymentEval& crp) {
    if (crp.n_served == 0) return {std::numeric_limits<double>::infinity(), true};
    return {p.efficiency / crp.efficiency, false};
}

void write_deployment_csv(std::ostream& out, std::span<const GroundNode> nodes, const DeploymentEval& e) {
    if (nodes.size() != e.per_node.size()) throw ArgumentError("write_deployment_csv: size mismatch");
    out << "node_id,serving_uav,x_m,y_m,service,sinr_db,cqi,rb_allocated,latency_s,served\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& r = e.per_node[i];
        out << r.node_id << ',' << r.serving_uav << ',' << fmt_num(nodes[i].position.x) << ','
            << fmt_num(nodes[i].position.y) << ',' << csv_field(nodes[i].service.name) << ','
            << fmt_num(r.sinr_db) << ',' << r.cqi << ',' << r.rb_allocated << ',' << fmt_num(r.achieved_latency_s)
            << ',' << (r.served ? 1 : 0) << '\n';
    }
}

void write_deployment_json(std::ostream& out, const DeploymentEval& e, double coverage_target) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["k"] = e.k;
    j["method"] = to_string(e.assignment.method);
    j["n_nodes"] = e.per_node.size();
    j["n_served"] = e.n_served;
    j["coverage_target"] = coverage_target;
    j["total_latency_s"] = e.total_latency_s;
    j["separation_ok"] = e.separation_ok;
    j["feasible"] = e.feasible;
    j["efficiency"] = e.efficiency;
    j["wcss"] = e.assignment.wcss;
    j["separation_violations"] = ordered_json::array();
    for (auto [a, b] : e.separation_violations) j["separation_violations"].push_back({a, b});
    j["uavs"] = ordered_json::array();
    const auto sizes = e.assignment.cluster_sizes();
    for (std::size_t u = 0; u < e.uavs.size(); ++u) {
        const auto& b = e.backhaul[u];
        ordered_json uj;
        uj["id"] = e.uavs[u].id;
        uj["x_m"] = e.uavs[u].position.x;
        uj["y_m"] = e.uavs[u].position.y;
        uj["z_m"] = e.uavs[u].position.z;
        uj["members"] = sizes[u];
        uj["rb_capacity"] = e.uavs[u].capacity_rb;
        uj["rb_used"] = b.rb_used;
        uj["backhaul_sinr_db"] = b.link.sinr_db;
        uj["backhaul_rate_bps"] = b.rate_bps;
        uj["admitted_load_bps"] = b.admitted_load_bps;
        j["uavs"].push_back(std::move(uj));
    }
    const auto h = e.cqi_histogram();
    j["cqi_histogram"] = h;
    out << j.dump(2) << '\n';
}

void write_link_trace_csv(std::ostream& out, std::span<const GroundNode> nodes, const DeploymentEval& e,
                          const SimConfig& config) {
    const auto& radio = config.radio;
    out << "node_id,tx_kind,tx_id,role,distance_m,tx_dbm,path_loss_db,rx_dbm\n";
    const auto tier = config.scenario.neighbor_bs();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Vec3 rx = lift(nodes[i].position, nodes[i].height_m);
        const HataModel from_uav(radio.f_mhz, radio.uav_height_m, rx.z);
        for (const auto& u : e.uavs) {
            const double d = dist(u.position, rx);
            const double pl = from_uav.loss_db(d);
            const bool serving = u.id == e.per_node[i].serving_uav;
            out << nodes[i].id << ",uav," << u.id << ',' << (serving ? "serving" : "interferer") << ','
                << fmt_num(d) << ',' << fmt_num(u.tx_dbm) << ',' << fmt_num(pl) << ','
                << fmt_num(u.tx_dbm + radio.antenna_gain_db - pl) << '\n';
        }
        if (tier.empty()) continue;
        const HataModel from_bs(radio.f_mhz, config.scenario.bs_height_m, rx.z);
        for (std::size_t b = 0; b < tier.size(); ++b) {
            const double d = dist(tier[b], rx);
            const double pl = from_bs.loss_db(d);
            out << nodes[i].id << ",bs," << b << ",interferer," << fmt_num(d) << ',' << fmt_num(radio.bs_tx_dbm) << ','
                << fmt_num(pl) << ',' << fmt_num(radio.bs_tx_dbm + radio.antenna_gain_db - pl) << '\n';
        }
    }
}

}  // namespace uavplan
