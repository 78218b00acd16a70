#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "uavplan/clustering.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

inline constexpr const char* kVersion = "1.0.0";

using CqiCounts = std::array<long long, kCqiLevels>;

// Compact view of a DeploymentEval kept per epoch.
struct EvalSummary {
    int k = 0;
    int n_served = 0;
    double total_latency_s = 0.0;
    bool separation_ok = true;
    bool feasible = false;
    double efficiency = 0.0;
};

EvalSummary summarize(const DeploymentEval& e);

struct EpochResult {
    double t_s = 0.0;
    bool kmeans_feasible = false;
    EvalSummary kmeans;  // at the selected k*
    EvalSummary crp;
    EfficiencyRatio ratio;
};

struct ReplicationReport {
    int replication = 0;
    std::uint64_t seed = 0;
    std::string scenario_id;
    std::vector<EpochResult> epochs;
    std::vector<ElbowPoint> elbow;  // initial snapshot
    int final_k = 0;                // max selected k over epochs
    // Initial-snapshot comparison against the CRP baseline.
    int served = 0;
    int crp_k = 0;
    int crp_served = 0;
    EfficiencyRatio ratio;
    std::map<int, CqiCounts> cqi;  // per evaluated k, summed over epochs
    bool ok = true;
    std::string error;
};

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for one value
    int count = 0;
};

Stat stat_of(const std::vector<double>& v);

struct AggregateReport {
    std::string scenario_id;
    double side_m = 0.0;
    int n_nodes = 0;
    int n_replications = 0;
    int n_failed = 0;
    bool partial = false;
    Stat k_star;       // final k (max over epochs)
    Stat k_star_t0;
    int infeasible_t0 = 0;
    Stat served;
    Stat efficiency;
    Stat crp_k;
    Stat crp_served;
    Stat crp_efficiency;
    Stat ratio;        // over finite ratios
    int infinite_ratio = 0;
    std::map<int, Stat> wcss;  // per k
    std::map<int, CqiCounts> cqi;
};

struct ExperimentResult {
    SimConfig config;
    std::vector<ReplicationReport> replications;
    AggregateReport aggregate;
};

// Evaluation times: 0, period, 2*period, ... up to the horizon.
std::vector<double> epoch_times(const SimConfig& c);

ReplicationReport run_replication(const SimConfig& config, int replication);

// Replications run on config.threads workers; results are kept in index order.
ExperimentResult run_experiment(const SimConfig& config);

// Every (farm side, node count) of config.grid.
std::vector<ExperimentResult> run_grid(const SimConfig& config);

AggregateReport aggregate(const SimConfig& config, const std::vector<ReplicationReport>& reps);

// Writes summary.csv, replications.csv, epochs.csv, elbow.csv,
// cqi_histogram.csv and manifest.json; returns the written paths.
std::vector<std::filesystem::path> emit_reports(const std::vector<ExperimentResult>& results,
                                                const SimConfig& base, const std::filesystem::path& out_dir);

}  // namespace uavplan
