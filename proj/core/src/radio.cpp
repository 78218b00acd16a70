#include "uavplan/radio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "uavplan/errors.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

double RadioParams::omega() const { return omega_ref ? *omega_ref : free_space_omega(f_mhz); }

void validate(const RadioParams& p) {
    if (!(p.f_mhz >= 150.0 && p.f_mhz <= 1500.0))
        throw ValidationError("radio.f_mhz", "must lie in [150, 1500] MHz");
    if (!(p.uav_height_m > 0.0)) throw ValidationError("radio.uav_height_m", "must be > 0");
    if (!(p.node_height_m > 0.0)) throw ValidationError("radio.node_height_m", "must be > 0");
    if (!(p.eta > 0.0)) throw ValidationError("radio.eta", "must be > 0");
    if (p.omega_ref && !(*p.omega_ref > 0.0))
        throw ValidationError("radio.omega_ref", "must be > 0");
    if (!(p.channel_bw_hz > 0.0)) throw ValidationError("radio.channel_bw_hz", "must be > 0");
    if (!(p.rb_bw_hz > 0.0)) throw ValidationError("radio.rb_bw_hz", "must be > 0");
    if (p.rb_per_channel < 1) throw ValidationError("radio.rb_per_channel", "must be >= 1");
    if (p.rb_per_channel * p.rb_bw_hz > p.channel_bw_hz)
        throw ValidationError("radio.rb_per_channel", "rb_per_channel * rb_bw_hz exceeds channel_bw_hz");
    if (p.rb_slots_per_interval < 1)
        throw ValidationError("radio.rb_slots_per_interval", "must be >= 1");
    for (std::size_t i = 1; i < p.cqi_thresholds_db.size(); ++i)
        if (!(p.cqi_thresholds_db[i] > p.cqi_thresholds_db[i - 1]))
            throw ValidationError("radio.cqi_thresholds_db", "must be strictly ascending");
    if (!(p.d_min_separation_m >= 0.0))
        throw ValidationError("radio.d_min_separation_m", "must be >= 0");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) {
    if (lin <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(lin);
}

HataModel::HataModel(double f_mhz, double tx_height_m, double rx_height_m) {
    if (!(f_mhz >= 150.0 && f_mhz <= 1500.0))
        throw DomainError("hata: frequency " + std::to_string(f_mhz) + " MHz outside [150, 1500]");
    if (!(tx_height_m > 0.0) || !(rx_height_m > 0.0))
        throw DomainError("hata: antenna heights must be positive");
    const double lf = std::log10(f_mhz);
    const double lhb = std::log10(tx_height_m);
    const double a_hm = (1.1 * lf - 0.7) * rx_height_m - (1.56 * lf - 0.8);
    const double urban = 69.55 + 26.16 * lf - 13.82 * lhb - a_hm;
    const double open_area = -4.78 * lf * lf + 18.33 * lf - 40.94;
    intercept_ = urban + open_area;
    slope_ = 44.9 - 6.55 * lhb;
}

double HataModel::loss_db(double distance_m) const {
    if (!(distance_m >= 1.0)) throw DomainError("hata: distance must be >= 1 m");
    return intercept_ + slope_ * std::log10(distance_m / 1000.0);
}

double hata_path_loss(double f_mhz, double distance_m, double tx_height_m, double rx_height_m) {
    return HataModel(f_mhz, tx_height_m, rx_height_m).loss_db(distance_m);
}

double free_space_omega(double f_mhz) {
    const double wavelength = kSpeedOfLight / (f_mhz * 1e6);
    const double g = wavelength / (4.0 * std::numbers::pi);
    return g * g;
}

double free_space_gain(double distance_m, double eta, double omega_ref) {
    if (!(distance_m > 0.0)) throw DomainError("free_space_gain: distance must be > 0");
    return omega_ref * std::pow(distance_m, -eta);
}

double noise_power_dbm(double bw_hz, double noise_figure_db) {
    if (!(bw_hz > 0.0)) throw DomainError("noise_power_dbm: bandwidth must be > 0");
    return -174.0 + 10.0 * std::log10(bw_hz) + noise_figure_db;
}

int cqi_from_sinr(double sinr_db, std::span<const double> thresholds_db) {
    // thresholds ascending: count of entries strictly below sinr
    return static_cast<int>(std::lower_bound(thresholds_db.begin(), thresholds_db.end(), sinr_db) -
                            thresholds_db.begin());
}

int cqi_from_sinr(double sinr_db, const CqiTable& thresholds_db) {
    return cqi_from_sinr(sinr_db, std::span<const double>(thresholds_db));
}

double shannon_throughput(double bw_hz, double sinr_linear) {
    if (!(bw_hz > 0.0)) throw DomainError("shannon_throughput: bandwidth must be > 0");
    if (!(sinr_linear >= 0.0)) throw DomainError("shannon_throughput: sinr must be >= 0");
    return bw_hz * std::log2(1.0 + sinr_linear);
}

CqiTable load_cqi_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open CQI table");
    CqiTable out{};
    std::size_t n = 0;
    std::string line;
    int lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {  // "cqi,threshold_db"
            header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string cqi_s, thr_s;
        if (!std::getline(ss, cqi_s, ',') || !std::getline(ss, thr_s, ','))
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected cqi,threshold_db");
        if (n >= out.size())
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": more than 14 thresholds");
        try {
            if (std::stoi(cqi_s) != static_cast<int>(n) + 1)
                throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": cqi codes must run 1..14");
            out[n++] = std::stod(thr_s);
        } catch (const std::logic_error&) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": not a number");
        }
    }
    if (n != out.size()) throw ConfigError(path.string() + ": expected 14 thresholds, got " + std::to_string(n));
    for (std::size_t i = 1; i < n; ++i)
        if (!(out[i] > out[i - 1]))
            throw ValidationError("cqi_thresholds_db", "must be strictly ascending");
    return out;
}

LinkBudget compose_link(double tx_dbm, double antenna_gain_db, double path_loss_db,
                        double uav_interference_mw, double bs_interference_mw, double noise_dbm,
                        const CqiTable& thresholds) {
    LinkBudget lb;
    lb.tx_dbm = tx_dbm;
    lb.path_loss_db = path_loss_db;
    lb.rx_dbm = tx_dbm + antenna_gain_db - path_loss_db;
    lb.uav_interference_dbm = linear_to_db(uav_interference_mw);
    lb.bs_interference_dbm = linear_to_db(bs_interference_mw);
    lb.interference_dbm = linear_to_db(uav_interference_mw + bs_interference_mw);
    lb.noise_dbm = noise_dbm;
    const double denom = uav_interference_mw + bs_interference_mw + db_to_linear(noise_dbm);
    lb.sinr_db = linear_to_db(db_to_linear(lb.rx_dbm) / denom);
    lb.cqi = cqi_from_sinr(lb.sinr_db, thresholds);
    return lb;
}

LinkBudget backhaul_sinr(const Vec3& uav, const Vec3& bs, std::span<const Vec3> interfering_bs,
                         std::span<const Vec3> interfering_uavs, const RadioParams& p) {
    const double omega = p.omega();
    const double g = p.antenna_gain_db;
    // 1 m floor keeps co-located stations finite
    auto d = [&](const Vec3& tx) { return std::max(1.0, dist(tx, uav)); };
    auto rx_mw = [&](const Vec3& tx, double tx_dbm) {
        return db_to_linear(tx_dbm + g) * free_space_gain(d(tx), p.eta, omega);
    };
    double bs_i = 0.0;
    for (const auto& b : interfering_bs) bs_i += rx_mw(b, p.bs_tx_dbm);
    double uav_i = 0.0;
    for (const auto& u : interfering_uavs) uav_i += rx_mw(u, p.uav_tx_dbm);
    const double pl_db = -linear_to_db(free_space_gain(d(bs), p.eta, omega));
    return compose_link(p.bs_tx_dbm, g, pl_db, uav_i, bs_i,
                        noise_power_dbm(p.channel_bw_hz, p.noise_figure_db), p.cqi_thresholds_db);
}

LinkBudget access_sinr(const GroundNode& node, const Vec3& serving_uav,
                       std::span<const Vec3> other_uavs, std::span<const Vec3> interfering_bs,
                       const RadioParams& p) {
    const Vec3 rx = lift(node.position, node.height_m);
    const double g = p.antenna_gain_db;
    double uav_i = 0.0;
    for (const auto& u : other_uavs)
        uav_i += db_to_linear(p.uav_tx_dbm + g - hata_path_loss(p.f_mhz, dist(u, rx), u.z, rx.z));
    double bs_i = 0.0;
    for (const auto& b : interfering_bs)
        bs_i += db_to_linear(p.bs_tx_dbm + g - hata_path_loss(p.f_mhz, dist(b, rx), b.z, rx.z));
    const double pl = hata_path_loss(p.f_mhz, dist(serving_uav, rx), serving_uav.z, rx.z);
    return compose_link(p.uav_tx_dbm, g, pl, uav_i, bs_i,
                        noise_power_dbm(p.rb_bw_hz, p.noise_figure_db), p.cqi_thresholds_db);
}

}  // namespace uavplan
