#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "uavplan/geometry.hpp"

namespace uavplan {

struct GroundNode;

constexpr double kSpeedOfLight = 299792458.0;
constexpr int kCqiLevels = 15;

using CqiTable = std::array<double, kCqiLevels - 1>;

// Conventional LTE 4-bit CQI switching points (dB).
constexpr CqiTable kDefaultCqiThresholdsDb = {-9.478, -6.658, -4.098, -1.798, 0.399,
                                              2.424,  6.367,  8.456,  10.266, 12.218,
                                              14.122, 15.849, 17.786, 19.809};

struct RadioParams {
    double f_mhz = 1500.0;
    double bs_tx_dbm = 45.0;
    double uav_tx_dbm = 20.0;
    double uav_height_m = 100.0;
    double node_height_m = 1.5;
    double eta = 3.0;
    // Linear gain at 1 m on BS<->UAV links; empty means free space at f_mhz.
    std::optional<double> omega_ref;
    double antenna_gain_db = 0.0;
    double noise_figure_db = 9.0;
    double channel_bw_hz = 20e6;
    double rb_bw_hz = 180e3;
    int rb_per_channel = 100;
    // Scheduling slots per reporting interval; a UAV grants up to
    // rb_per_channel * rb_slots_per_interval RBs per interval.
    int rb_slots_per_interval = 3;
    CqiTable cqi_thresholds_db = kDefaultCqiThresholdsDb;
    double d_min_separation_m = 200.0;

    double omega() const;
    int rb_budget() const { return rb_per_channel * rb_slots_per_interval; }
    bool operator==(const RadioParams&) const = default;
};

void validate(const RadioParams& p);  // throws ValidationError

double db_to_linear(double db);
double linear_to_db(double lin);  // 0 -> -inf

// Standard small/medium-city Hata loss with the open-area correction.
// Below 1 km the same log-distance law is extrapolated.
class HataModel {
public:
    HataModel(double f_mhz, double tx_height_m, double rx_height_m);
    double loss_db(double distance_m) const;
    double slope_db_per_decade() const { return slope_; }

private:
    double intercept_;  // loss at 1 km
    double slope_;
};

double hata_path_loss(double f_mhz, double distance_m, double tx_height_m, double rx_height_m);
double free_space_omega(double f_mhz);
double free_space_gain(double distance_m, double eta, double omega_ref);
double noise_power_dbm(double bw_hz, double noise_figure_db);
int cqi_from_sinr(double sinr_db, std::span<const double> thresholds_db);
int cqi_from_sinr(double sinr_db, const CqiTable& thresholds_db);
double shannon_throughput(double bw_hz, double sinr_linear);

CqiTable load_cqi_table(const std::filesystem::path& path);

struct LinkBudget {
    double tx_dbm = 0.0;
    double path_loss_db = 0.0;
    double rx_dbm = 0.0;
    double interference_dbm = 0.0;  // total, -inf when nothing interferes
    double uav_interference_dbm = 0.0;
    double bs_interference_dbm = 0.0;
    double noise_dbm = 0.0;
    double sinr_db = 0.0;
    int cqi = 0;

    double sinr_linear() const { return db_to_linear(sinr_db); }
};

// Assembles a budget from a signal and interference powers in mW.
LinkBudget compose_link(double tx_dbm, double antenna_gain_db, double path_loss_db,
                        double uav_interference_mw, double bs_interference_mw,
                        double noise_dbm, const CqiTable& thresholds);

// BS -> UAV relay link. Interferers: other terrestrial BSs (bs_tx_dbm) and
// other UAVs (uav_tx_dbm), all on the omega*d^-eta law; noise over channel_bw.
LinkBudget backhaul_sinr(const Vec3& uav, const Vec3& bs, std::span<const Vec3> interfering_bs,
                         std::span<const Vec3> interfering_uavs, const RadioParams& p);

// UAV -> ground node access link on the Hata law; noise over one RB.
// other_uavs must not contain the serving UAV.
LinkBudget access_sinr(const GroundNode& node, const Vec3& serving_uav,
                       std::span<const Vec3> other_uavs, std::span<const Vec3> interfering_bs,
                       const RadioParams& p);

}  // namespace uavplan
