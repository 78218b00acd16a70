#include "uavplan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <thread>

#include <nlohmann/json.hpp>

#include "uavplan/config.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/format.hpp"
#include "uavplan/mobility.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

EvalSummary summarize(const DeploymentEval& e) {
    return {e.k, e.n_served, e.total_latency_s, e.separation_ok, e.feasible, e.efficiency};
}

Stat stat_of(const std::vector<double>& v) {
    Stat s;
    s.count = static_cast<int>(v.size());
    if (v.empty()) return s;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return s;
}

std::vector<double> epoch_times(const SimConfig& c) {
    std::vector<double> t;
    for (long long e = 0;; ++e) {
        const double te = static_cast<double>(e) * c.recluster_period_s;
        if (te > c.horizon_s * (1.0 + 1e-12)) break;
        t.push_back(te);
    }
    return t;
}

ReplicationReport run_replication(const SimConfig& config, int replication) {
    ReplicationReport rep;
    rep.replication = replication;
    rep.scenario_id = scenario_id(config.scenario);
    rep.seed = replication_seed(config.master_seed, static_cast<std::uint64_t>(replication), rep.scenario_id);
    try {
        auto nodes = generate_nodes(config, rep.seed);
        auto streams = make_node_streams(rep.seed, nodes.size());
        {
            const auto pts = positions(nodes);
            const int k_hi = std::min<int>(config.grid.elbow_k_max, static_cast<int>(count_distinct(pts)));
            std::vector<int> ks;
            for (int k = 1; k <= k_hi; ++k) ks.push_back(k);
            rep.elbow = elbow_scan(pts, ks, rep.seed,
                                   {config.clustering.n_init, config.clustering.max_iter, config.clustering.tol_m});
        }
        const auto times = epoch_times(config);
        for (std::size_t e = 0; e < times.size(); ++e) {
            if (e > 0)
                nodes = advance_all(std::move(nodes), times[e] - times[e - 1], config.dt_s, config.scenario,
                                    config.mobility, streams);
            const std::uint64_t es = substream_seed(rep.seed, Stream::epoch, e);
            const auto sel = select_uav_count(nodes, config, es);
            const auto crp = evaluate_crp_deployment(nodes, config, es);
            const auto& chosen = sel.chosen();
            EpochResult er;
            er.t_s = times[e];
            er.kmeans_feasible = sel.feasible;
            er.kmeans = summarize(chosen);
            er.crp = summarize(crp);
            er.ratio = efficiency_ratio(chosen, crp);
            rep.epochs.push_back(er);
            for (const auto& ev : sel.evals) {
                auto& counts = rep.cqi[ev.k];
                for (const auto& r : ev.per_node) ++counts[static_cast<std::size_t>(r.cqi)];
            }
            rep.final_k = std::max(rep.final_k, sel.k_star);
        }
        const auto& first = rep.epochs.front();
        rep.served = first.kmeans.n_served;
        rep.crp_k = first.crp.k;
        rep.crp_served = first.crp.n_served;
        rep.ratio = first.ratio;
    } catch (const std::exception& ex) {
        rep.ok = false;
        rep.error = ex.what();
    }
    return rep;
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    unsigned t = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, n));
    if (t <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < t; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

AggregateReport aggregate(const SimConfig& config, const std::vector<ReplicationReport>& reps) {
    AggregateReport a;
    a.scenario_id = scenario_id(config.scenario);
    a.side_m = config.scenario.side_m;
    a.n_nodes = config.scenario.n_nodes;
    a.n_replications = static_cast<int>(reps.size());
    std::vector<double> k, k0, served, eff, ck, cs, ce, ratio;
    std::map<int, std::vector<double>> w;
    for (const auto& r : reps) {
        if (!r.ok) {
            ++a.n_failed;
            continue;
        }
        const auto& e0 = r.epochs.front();
        k.push_back(r.final_k);
        k0.push_back(e0.kmeans.k);
        if (!e0.kmeans_feasible) ++a.infeasible_t0;
        served.push_back(r.served);
        eff.push_back(e0.kmeans.efficiency);
        ck.push_back(r.crp_k);
        cs.push_back(r.crp_served);
        ce.push_back(e0.crp.efficiency);
        if (r.ratio.infinite)
            ++a.infinite_ratio;
        else
            ratio.push_back(r.ratio.value);
        for (const auto& p : r.elbow) w[p.k].push_back(p.wcss);
        for (const auto& [kk, counts] : r.cqi) {
            auto& dst = a.cqi[kk];
            for (std::size_t i = 0; i < counts.size(); ++i) dst[i] += counts[i];
        }
    }
    a.partial = a.n_failed > 0;
    a.k_star = stat_of(k);
    a.k_star_t0 = stat_of(k0);
    a.served = stat_of(served);
    a.efficiency = stat_of(eff);
    a.crp_k = stat_of(ck);
    a.crp_served = stat_of(cs);
    a.crp_efficiency = stat_of(ce);
    a.ratio = stat_of(ratio);
    for (auto& [kk, v] : w) a.wcss[kk] = stat_of(v);
    return a;
}

ExperimentResult run_experiment(const SimConfig& config) {
    validate(config);
    ExperimentResult res;
    res.config = config;
    res.replications.resize(static_cast<std::size_t>(config.n_replications));
    parallel_for(res.replications.size(), config.threads,
                 [&](std::size_t i) { res.replications[i] = run_replication(config, static_cast<int>(i)); });
    res.aggregate = aggregate(config, res.replications);
    return res;
}

std::vector<ExperimentResult> run_grid(const SimConfig& config) {
    validate(config);
    std::vector<ExperimentResult> out;
    for (double side : config.grid.farm_sides_m)
        for (int n : config.grid.node_counts) {
            ExperimentResult r;
            r.config = with_scenario(config, side, n);
            r.replications.resize(static_cast<std::size_t>(config.n_replications));
            out.push_back(std::move(r));
        }
    // one flat job list, heaviest scenarios first
    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t s = 0; s < out.size(); ++s)
        for (std::size_t r = 0; r < out[s].replications.size(); ++r) jobs.emplace_back(s, r);
    std::stable_sort(jobs.begin(), jobs.end(), [&](const auto& a, const auto& b) {
        const auto& sa = out[a.first].config.scenario;
        const auto& sb = out[b.first].config.scenario;
        return sa.n_nodes * sa.side_m > sb.n_nodes * sb.side_m;
    });
    parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
        auto [s, r] = jobs[j];
        out[s].replications[r] = run_replication(out[s].config, static_cast<int>(r));
    });
    for (auto& r : out) r.aggregate = aggregate(r.config, r.replications);
    return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(p.string(), "cannot open for writing");
    return f;
}

void close_out(std::ofstream& f, const std::filesystem::path& p) {
    f.close();
    if (!f) throw IoError(p.string(), "write failed");
}

std::string stat_cols(const Stat& s) { return fmt_num(s.mean) + "," + fmt_num(s.stddev); }

}  // namespace

std::vector<std::filesystem::path> emit_reports(const std::vector<ExperimentResult>& results, const SimConfig& base,
                                                const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir.string(), "cannot create directory: " + ec.message());
    std::vector<std::filesystem::path> written;

    {
        const auto p = out_dir / "summary.csv";
        auto f = open_out(p);
        f << "scenario,farm,side_m,n_nodes,replications,failed,k_star_mean,k_star_std,k_star_t0_mean,k_star_t0_std,"
             "infeasible_t0,served_mean,served_std,efficiency_mean,efficiency_std,crp_k_mean,crp_k_std,"
             "crp_served_mean,crp_served_std,crp_efficiency_mean,crp_efficiency_std,efficiency_ratio_mean,"
             "efficiency_ratio_std,infinite_ratio\n";
        for (const auto& r : results) {
            const auto& a = r.aggregate;
            f << a.scenario_id << ',' << farm_label(a.side_m) << ',' << fmt_num(a.side_m) << ',' << a.n_nodes << ','
              << a.n_replications << ',' << a.n_failed << ',' << stat_cols(a.k_star) << ',' << stat_cols(a.k_star_t0)
              << ',' << a.infeasible_t0 << ',' << stat_cols(a.served) << ',' << stat_cols(a.efficiency) << ','
              << stat_cols(a.crp_k) << ',' << stat_cols(a.crp_served) << ',' << stat_cols(a.crp_efficiency) << ','
              << stat_cols(a.ratio) << ',' << a.infinite_ratio << '\n';
        }
        close_out(f, p);
        written.push_back(p);
    }
    {
        const auto p = out_dir / "replications.csv";
        auto f = open_out(p);
        f << "scenario,replication,seed,ok,k_star,k_star_t0,feasible_t0,served,efficiency,crp_k,crp_served,"
             "crp_efficiency,efficiency_ratio,ratio_infinite,error\n";
        for (const auto& r : results)
            for (const auto& rep : r.replications) {
                f << rep.scenario_id << ',' << rep.replication << ',' << rep.seed << ',' << (rep.ok ? 1 : 0) << ',';
                if (rep.ok) {
                    const auto& e0 = rep.epochs.front();
                    f << rep.final_k << ',' << e0.kmeans.k << ',' << (e0.kmeans_feasible ? 1 : 0) << ',' << rep.served
                      << ',' << fmt_num(e0.kmeans.efficiency) << ',' << rep.crp_k << ',' << rep.crp_served << ','
                      << fmt_num(e0.crp.efficiency) << ',' << fmt_num(rep.ratio.value) << ','
                      << (rep.ratio.infinite ? 1 : 0) << ",\n";
                } else {
                    f << ",,,,,,,,,," << csv_field(rep.error) << '\n';
                }
            }
        close_out(f, p);
        written.push_back(p);
    }
    {
        const auto p = out_dir / "epochs.csv";
        auto f = open_out(p);
        f << "scenario,replication,t_s,k_star,feasible,served,total_latency_s,crp_k,crp_served,crp_separation_ok,"
             "efficiency_ratio,ratio_infinite\n";
        for (const auto& r : results)
            for (const auto& rep : r.replications)
                for (const auto& e : rep.epochs)
                    f << rep.scenario_id << ',' << rep.replication << ',' << fmt_num(e.t_s) << ',' << e.kmeans.k << ','
                      << (e.kmeans_feasible ? 1 : 0) << ',' << e.kmeans.n_served << ','
                      << fmt_num(e.kmeans.total_latency_s) << ',' << e.crp.k << ',' << e.crp.n_served << ','
                      << (e.crp.separation_ok ? 1 : 0) << ',' << fmt_num(e.ratio.value) << ','
                      << (e.ratio.infinite ? 1 : 0) << '\n';
        close_out(f, p);
        written.push_back(p);
    }
    {
        const auto p = out_dir / "elbow.csv";
        auto f = open_out(p);
        f << "scenario,side_m,n_nodes,k,wcss_mean,wcss_std,samples\n";
        for (const auto& r : results)
            for (const auto& [k, s] : r.aggregate.wcss)
                f << r.aggregate.scenario_id << ',' << fmt_num(r.aggregate.side_m) << ',' << r.aggregate.n_nodes << ','
                  << k << ',' << stat_cols(s) << ',' << s.count << '\n';
        close_out(f, p);
        written.push_back(p);
    }
    {
        const auto p = out_dir / "cqi_histogram.csv";
        auto f = open_out(p);
        f << "scenario,side_m,n_nodes,k,cqi,count,fraction\n";
        for (const auto& r : results)
            for (const auto& [k, counts] : r.aggregate.cqi) {
                long long total = 0;
                for (auto c : counts) total += c;
                for (std::size_t q = 0; q < counts.size(); ++q)
                    f << r.aggregate.scenario_id << ',' << fmt_num(r.aggregate.side_m) << ',' << r.aggregate.n_nodes
                      << ',' << k << ',' << q << ',' << counts[q] << ','
                      << fmt_num(total ? static_cast<double>(counts[q]) / static_cast<double>(total) : 0.0) << '\n';
            }
        close_out(f, p);
        written.push_back(p);
    }
    {
        using nlohmann::ordered_json;
        const auto p = out_dir / "manifest.json";
        ordered_json m;
        m["tool"] = "uavplan";
        m["version"] = kVersion;
        m["master_seed"] = base.master_seed;
        m["seed_rule"] =
            "seed_r = master_seed XOR splitmix64(fnv1a64(scenario_id) XOR splitmix64(r)); "
            "every replication redraws node positions, services and mobility";
        m["epoch_rule"] = "evaluate at t = 0, period, 2*period, ... <= horizon; k_star = max over epochs";
        m["config"] = ordered_json::parse(dump_config(base));
        m["scenarios"] = ordered_json::array();
        for (const auto& r : results) {
            ordered_json s;
            s["id"] = r.aggregate.scenario_id;
            s["side_m"] = r.aggregate.side_m;
            s["n_nodes"] = r.aggregate.n_nodes;
            s["partial"] = r.aggregate.partial;
            s["replications"] = ordered_json::array();
            for (const auto& rep : r.replications) {
                ordered_json rj{{"index", rep.replication}, {"seed", rep.seed}, {"ok", rep.ok}};
                if (!rep.ok) rj["error"] = rep.error;
                s["replications"].push_back(std::move(rj));
            }
            m["scenarios"].push_back(std::move(s));
        }
        auto f = open_out(p);
        f << m.dump(2) << '\n';
        close_out(f, p);
        written.push_back(p);
    }
    return written;
}

}  // namespace uavplan
