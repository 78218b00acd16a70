// uavplan command-line front end: run | plan | elbow | compare
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uavplan/config.hpp"
#include "uavplan/errors.hpp"
#include "uavplan/format.hpp"
#include "uavplan/harness.hpp"
#include "uavplan/planner.hpp"

namespace fs = std::filesystem;
using namespace uavplan;

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> reps;
    std::optional<int> threads;
    std::string out;
    std::string scenario;
};

constexpr const char* kOutEnv = "UAVPLAN_OUT_DIR";

fs::path out_dir(const Options& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv(kOutEnv); env && *env) return env;
    return "uavplan-out";
}

SimConfig base_config(const Options& o) {
    SimConfig c = o.config.empty() ? parse_config("") : load_config(o.config);
    if (o.seed) c.master_seed = *o.seed;
    if (o.reps) c.n_replications = *o.reps;
    if (o.threads) c.threads = *o.threads;
    validate(c);
    return c;
}

// The named grid scenario, or the config's own scenario.
SimConfig scenario_config(const Options& o) {
    SimConfig c = base_config(o);
    return o.scenario.empty() ? c : scenario_by_name(c, o.scenario);
}

std::ofstream open_file(const fs::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(p.string(), "cannot open for writing");
    return f;
}

void ensure_dir(const fs::path& d) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw IoError(d.string(), "cannot create directory: " + ec.message());
}

int cmd_run(const Options& o) {
    const SimConfig base = base_config(o);
    std::vector<ExperimentResult> results;
    if (o.scenario.empty())
        results = run_grid(base);
    else
        results.push_back(run_experiment(scenario_by_name(base, o.scenario)));
    const auto dir = out_dir(o);
    emit_reports(results, base, dir);
    std::cout << "scenario,k_star_mean,served_mean,crp_k_mean,efficiency_ratio_mean\n";
    for (const auto& r : results) {
        const auto& a = r.aggregate;
        std::cout << a.scenario_id << ',' << fmt_num(a.k_star.mean) << ',' << fmt_num(a.served.mean) << ','
                  << fmt_num(a.crp_k.mean) << ',' << fmt_num(a.ratio.mean) << '\n';
    }
    std::cout << "reports written to " << dir.string() << '\n';
    for (const auto& r : results)
        if (r.aggregate.partial) return 5;
    return 0;
}

int cmd_plan(const Options& o) {
    const SimConfig c = scenario_config(o);
    const std::string id = scenario_id(c.scenario);
    const auto seed = replication_seed(c.master_seed, 0, id);
    const auto nodes = generate_nodes(c, seed);
    const auto sel = select_uav_count(nodes, c, substream_seed(seed, Stream::epoch, 0));
    const auto dir = out_dir(o);
    ensure_dir(dir);
    std::vector<int> ids;
    for (const auto& n : nodes) ids.push_back(n.id);
    const auto pts = positions(nodes);
    const auto& chosen = sel.chosen();
    {
        auto f = open_file(dir / "assignment.csv");
        write_assignment_csv(f, ids, pts, chosen.assignment);
    }
    for (const auto& e : sel.evals) {
        auto f = open_file(dir / ("deployment_k" + std::to_string(e.k) + ".csv"));
        write_deployment_csv(f, nodes, e);
        auto j = open_file(dir / ("deployment_k" + std::to_string(e.k) + ".json"));
        write_deployment_json(j, e, c.coverage_target);
    }
    {
        auto f = open_file(dir / "link_trace.csv");
        write_link_trace_csv(f, nodes, chosen, c);
    }
    std::cout << "scenario " << id << " seed " << seed << ": k*=" << sel.k_star
              << (sel.feasible ? "" : " (no feasible k; most nodes served)") << ", served " << chosen.n_served << "/"
              << nodes.size() << '\n';
    return 0;
}

int cmd_elbow(const Options& o) {
    const SimConfig c = scenario_config(o);
    const std::string id = scenario_id(c.scenario);
    std::vector<ReplicationReport> reps;
    std::map<int, std::vector<double>> w;
    for (int r = 0; r < c.n_replications; ++r) {
        const auto seed = replication_seed(c.master_seed, static_cast<std::uint64_t>(r), id);
        const auto pts = positions(generate_nodes(c, seed));
        std::vector<int> ks;
        for (int k = 1; k <= std::min<int>(c.grid.elbow_k_max, static_cast<int>(count_distinct(pts))); ++k)
            ks.push_back(k);
        for (const auto& p : elbow_scan(pts, ks, seed, {c.clustering.n_init, c.clustering.max_iter, c.clustering.tol_m}))
            w[p.k].push_back(p.wcss);
    }
    const auto dir = out_dir(o);
    ensure_dir(dir);
    auto f = open_file(dir / "elbow.csv");
    f << "scenario,side_m,n_nodes,k,wcss_mean,wcss_std,samples\n";
    for (const auto& [k, v] : w) {
        const Stat s = stat_of(v);
        f << id << ',' << fmt_num(c.scenario.side_m) << ',' << c.scenario.n_nodes << ',' << k << ','
          << fmt_num(s.mean) << ',' << fmt_num(s.stddev) << ',' << s.count << '\n';
        std::cout << "k=" << k << " wcss=" << fmt_num(s.mean) << '\n';
    }
    return 0;
}

int cmd_compare(const Options& o) {
    const SimConfig c = scenario_config(o);
    const std::string id = scenario_id(c.scenario);
    const auto dir = out_dir(o);
    ensure_dir(dir);
    auto f = open_file(dir / "compare.csv");
    f << "scenario,replication,seed,kmeans_k,kmeans_served,kmeans_feasible,crp_k,crp_served,efficiency_ratio,"
         "ratio_infinite\n";
    std::vector<double> kk, ks, ck, cs, ratio;
    for (int r = 0; r < c.n_replications; ++r) {
        const auto seed = replication_seed(c.master_seed, static_cast<std::uint64_t>(r), id);
        const auto nodes = generate_nodes(c, seed);
        const auto es = substream_seed(seed, Stream::epoch, 0);
        const auto sel = select_uav_count(nodes, c, es);
        const auto crp = evaluate_crp_deployment(nodes, c, es);
        const auto& p = sel.chosen();
        const auto er = efficiency_ratio(p, crp);
        f << id << ',' << r << ',' << seed << ',' << p.k << ',' << p.n_served << ',' << (sel.feasible ? 1 : 0) << ','
          << crp.k << ',' << crp.n_served << ',' << fmt_num(er.value) << ',' << (er.infinite ? 1 : 0) << '\n';
        kk.push_back(p.k);
        ks.push_back(p.n_served);
        ck.push_back(crp.k);
        cs.push_back(crp.n_served);
        if (!er.infinite) ratio.push_back(er.value);
    }
    std::cout << id << ": kmeans " << fmt_num(stat_of(ks).mean) << "/" << fmt_num(stat_of(kk).mean) << ", crp "
              << fmt_num(stat_of(cs).mean) << "/" << fmt_num(stat_of(ck).mean) << ", efficiency ratio "
              << fmt_num(stat_of(ratio).mean) << '\n';
    return 0;
}

int report_error(const std::string& kind, const std::string& msg, const std::string& extra_key = {},
                 const std::string& extra = {}) {
    nlohmann::ordered_json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = msg;
    if (!extra_key.empty()) j["error"][extra_key] = extra;
    std::cerr << j.dump() << '\n';
    if (kind == "config" || kind == "validation") return 2;
    if (kind == "io") return 3;
    if (kind == "argument" || kind == "domain") return 4;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV base-station planner for mobile IoT nodes on farms"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON config file (defaults when omitted)");
        sub->add_option("--seed", o.seed, "master seed override");
        sub->add_option("--reps", o.reps, "replications override")->check(CLI::PositiveNumber);
        sub->add_option("--threads", o.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
        sub->add_option("--out", o.out, std::string("output directory (else $") + kOutEnv + ", else ./uavplan-out)");
        sub->add_option("--scenario", o.scenario, "grid scenario id, e.g. small-100 or medium-500");
    };
    auto* run = app.add_subcommand("run", "replicated grid (or one --scenario) with all reports");
    auto* plan = app.add_subcommand("plan", "k* selection on one snapshot, per-k deployment files");
    auto* elbow = app.add_subcommand("elbow", "WCSS elbow scan");
    auto* compare = app.add_subcommand("compare", "k-means planner vs CRP baseline on one scenario");
    for (auto* s : {run, plan, elbow, compare}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(o);
        if (*plan) return cmd_plan(o);
        if (*elbow) return cmd_elbow(o);
        if (*compare) return cmd_compare(o);
    } catch (const ValidationError& e) {
        return report_error("validation", e.what(), "field", e.field());
    } catch (const ConfigError& e) {
        return report_error("config", e.what());
    } catch (const IoError& e) {
        return report_error("io", e.what(), "path", e.path());
    } catch (const ArgumentError& e) {
        return report_error("argument", e.what());
    } catch (const DomainError& e) {
        return report_error("domain", e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
    return 1;
}
