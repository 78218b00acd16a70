#include "uavplan/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uavplan/errors.hpp"
#include "uavplan/log.hpp"

namespace uavplan {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

// Walks one JSON object, remembers which keys were consumed and reports
// leftovers as unknown.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions()) return;
        for (const auto& [key, _] : j_.items())
            if (!seen_.count(key)) throw ConfigError("unknown key '" + key_path(key) + "'");
    }

    template <class T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("key '" + key_path(key) + "': wrong type");
        }
    }

    template <class T>
    void get_optional(const char* key, std::optional<T>& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        if (it->is_null()) {
            out.reset();
            return;
        }
        try {
            out = it->template get<T>();
        } catch (const json::exception&) {
            throw ConfigError("key '" + key_path(key) + "': wrong type");
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

private:
    std::string where() const { return path_.empty() ? "document" : "'" + path_ + "'"; }
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_service_mix(const json& arr, std::vector<ServiceShare>& out) {
    if (!arr.is_array()) throw ConfigError("key 'scenario.service_mix': expected a list");
    out.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Section s(arr[i], "scenario.service_mix[" + std::to_string(i) + "]");
        ServiceShare share;
        s.get("name", share.service.name);
        s.get("rb_demand", share.service.rb_demand);
        s.get("packet_bits", share.service.packet_bits);
        s.get("deadline_s", share.service.deadline_s);
        s.get("fraction", share.fraction);
        out.push_back(std::move(share));
    }
}

void read(const json& root, SimConfig& c, const std::filesystem::path& base_dir) {
    Section top(root, "");
    if (const json* j = top.child("scenario")) {
        Section s(*j, "scenario");
        auto& f = c.scenario;
        s.get("side_m", f.side_m);
        std::optional<std::array<double, 2>> bs;
        s.get_optional("bs_position_m", bs);
        f.bs_position = bs ? Vec2{(*bs)[0], (*bs)[1]} : Vec2{f.side_m / 2.0, f.side_m / 2.0};
        s.get("bs_height_m", f.bs_height_m);
        s.get("n_nodes", f.n_nodes);
        if (const json* mix = s.child("service_mix")) read_service_mix(*mix, f.service_mix);
        if (const json* t = s.child("neighbor_tier")) {
            Section ts(*t, "scenario.neighbor_tier");
            ts.get("enabled", f.neighbor_tier_enabled);
            ts.get("distance_m", f.neighbor_tier_distance_m);
        }
    } else {
        c.scenario.bs_position = {c.scenario.side_m / 2.0, c.scenario.side_m / 2.0};
    }
    if (const json* j = top.child("radio")) {
        Section s(*j, "radio");
        auto& r = c.radio;
        s.get("f_mhz", r.f_mhz);
        s.get("bs_tx_dbm", r.bs_tx_dbm);
        s.get("uav_tx_dbm", r.uav_tx_dbm);
        s.get("uav_height_m", r.uav_height_m);
        s.get("node_height_m", r.node_height_m);
        s.get("eta", r.eta);
        s.get_optional("omega_ref", r.omega_ref);
        s.get("antenna_gain_db", r.antenna_gain_db);
        s.get("noise_figure_db", r.noise_figure_db);
        s.get("channel_bw_hz", r.channel_bw_hz);
        s.get("rb_bw_hz", r.rb_bw_hz);
        s.get("rb_per_channel", r.rb_per_channel);
        s.get("rb_slots_per_interval", r.rb_slots_per_interval);
        s.get("d_min_separation_m", r.d_min_separation_m);
        std::optional<std::string> table;
        s.get_optional("cqi_table", table);
        const json* thr = s.child("cqi_thresholds_db");
        if (table && thr) throw ConfigError("keys 'radio.cqi_table' and 'radio.cqi_thresholds_db' are exclusive");
        if (table) {
            std::filesystem::path p(*table);
            if (p.is_relative()) p = base_dir / p;
            r.cqi_thresholds_db = load_cqi_table(p);
        }
        if (thr) {
            if (!thr->is_array() || thr->size() != r.cqi_thresholds_db.size())
                throw ValidationError("radio.cqi_thresholds_db", "expected 14 values");
            try {
                for (std::size_t i = 0; i < thr->size(); ++i) r.cqi_thresholds_db[i] = (*thr)[i].get<double>();
            } catch (const json::exception&) {
                throw ConfigError("key 'radio.cqi_thresholds_db': wrong type");
            }
        }
    }
    if (const json* j = top.child("mobility")) {
        Section s(*j, "mobility");
        s.get("v_min", c.mobility.v_min);
        s.get("v_max", c.mobility.v_max);
        s.get("pause_min", c.mobility.pause_min);
        s.get("pause_max", c.mobility.pause_max);
        s.get_optional("direction_interval_deg", c.direction_interval_deg);
    }
    if (const json* j = top.child("sim")) {
        Section s(*j, "sim");
        s.get("dt_s", c.dt_s);
        s.get("horizon_s", c.horizon_s);
        s.get("recluster_period_s", c.recluster_period_s);
        s.get("k_max", c.k_max);
        s.get("coverage_target", c.coverage_target);
        s.get("n_replications", c.n_replications);
        s.get("master_seed", c.master_seed);
        s.get("threads", c.threads);
    }
    if (const json* j = top.child("clustering")) {
        Section s(*j, "clustering");
        s.get("n_init", c.clustering.n_init);
        s.get("max_iter", c.clustering.max_iter);
        s.get("tol_m", c.clustering.tol_m);
        s.get("crp_a", c.clustering.crp_a);
        s.get_optional("crp_lambda_m", c.clustering.crp_lambda_m);
    }
    if (const json* j = top.child("planner")) {
        Section s(*j, "planner");
        s.get("cqi_min", c.planner.cqi_min);
        s.get("backhaul_gating", c.planner.backhaul_gating);
        s.get("backhaul_bw_hz", c.planner.backhaul_bw_hz);
    }
    if (const json* j = top.child("grid")) {
        Section s(*j, "grid");
        s.get("farm_sides_m", c.grid.farm_sides_m);
        s.get("node_counts", c.grid.node_counts);
        s.get("elbow_k_max", c.grid.elbow_k_max);
    }
}

}  // namespace

SimConfig parse_config(std::string_view text, std::string_view source, const std::filesystem::path& base_dir) {
    SimConfig c;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        validate(c);
        return c;
    }
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // message carries "at line L, column C"
        throw ConfigError(std::string(source) + ": " + e.what());
    }
    read(root, c, base_dir);
    if (c.direction_interval_deg)
        log_warning("mobility.direction_interval_deg is ignored: Random Waypoint draws headings from waypoints");
    validate(c);
    return c;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string(), path.parent_path());
}

std::string dump_config(const SimConfig& c) {
    ojson j;
    const auto& f = c.scenario;
    auto& s = j["scenario"];
    s["side_m"] = f.side_m;
    s["bs_position_m"] = {f.bs_position.x, f.bs_position.y};
    s["bs_height_m"] = f.bs_height_m;
    s["n_nodes"] = f.n_nodes;
    s["service_mix"] = ojson::array();
    for (const auto& share : f.service_mix)
        s["service_mix"].push_back({{"name", share.service.name},
                                    {"rb_demand", share.service.rb_demand},
                                    {"packet_bits", share.service.packet_bits},
                                    {"deadline_s", share.service.deadline_s},
                                    {"fraction", share.fraction}});
    s["neighbor_tier"] = {{"enabled", f.neighbor_tier_enabled}, {"distance_m", f.neighbor_tier_distance_m}};
    const auto& r = c.radio;
    auto& rj = j["radio"];
    rj["f_mhz"] = r.f_mhz;
    rj["bs_tx_dbm"] = r.bs_tx_dbm;
    rj["uav_tx_dbm"] = r.uav_tx_dbm;
    rj["uav_height_m"] = r.uav_height_m;
    rj["node_height_m"] = r.node_height_m;
    rj["eta"] = r.eta;
    rj["omega_ref"] = r.omega_ref ? ojson(*r.omega_ref) : ojson(nullptr);
    rj["antenna_gain_db"] = r.antenna_gain_db;
    rj["noise_figure_db"] = r.noise_figure_db;
    rj["channel_bw_hz"] = r.channel_bw_hz;
    rj["rb_bw_hz"] = r.rb_bw_hz;
    rj["rb_per_channel"] = r.rb_per_channel;
    rj["rb_slots_per_interval"] = r.rb_slots_per_interval;
    rj["cqi_thresholds_db"] = r.cqi_thresholds_db;
    rj["d_min_separation_m"] = r.d_min_separation_m;
    auto& m = j["mobility"];
    m["v_min"] = c.mobility.v_min;
    m["v_max"] = c.mobility.v_max;
    m["pause_min"] = c.mobility.pause_min;
    m["pause_max"] = c.mobility.pause_max;
    if (c.direction_interval_deg) m["direction_interval_deg"] = *c.direction_interval_deg;
    auto& sim = j["sim"];
    sim["dt_s"] = c.dt_s;
    sim["horizon_s"] = c.horizon_s;
    sim["recluster_period_s"] = c.recluster_period_s;
    sim["k_max"] = c.k_max;
    sim["coverage_target"] = c.coverage_target;
    sim["n_replications"] = c.n_replications;
    sim["master_seed"] = c.master_seed;
    sim["threads"] = c.threads;
    auto& cl = j["clustering"];
    cl["n_init"] = c.clustering.n_init;
    cl["max_iter"] = c.clustering.max_iter;
    cl["tol_m"] = c.clustering.tol_m;
    cl["crp_a"] = c.clustering.crp_a;
    cl["crp_lambda_m"] = c.clustering.crp_lambda_m ? ojson(*c.clustering.crp_lambda_m) : ojson(nullptr);
    auto& p = j["planner"];
    p["cqi_min"] = c.planner.cqi_min;
    p["backhaul_gating"] = c.planner.backhaul_gating;
    p["backhaul_bw_hz"] = c.planner.backhaul_bw_hz;
    auto& g = j["grid"];
    g["farm_sides_m"] = c.grid.farm_sides_m;
    g["node_counts"] = c.grid.node_counts;
    g["elbow_k_max"] = c.grid.elbow_k_max;
    return j.dump(2) + "\n";
}

}  // namespace uavplan
