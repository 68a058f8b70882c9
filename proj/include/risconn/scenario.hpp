#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "risconn/geometry.hpp"

namespace risconn {

/// Radio-layer constants shared by every node. Unit discipline: powers are
/// linear watts, distances meters, SNR thresholds dB. dBm/dB config values are
/// converted at ingestion (see config.hpp), never stored.
struct RadioParams {
  double carrier_freq_hz = 3.0e9;   // f_c
  double lightspeed_m_s = 3.0e8;    // c
  double pathloss_exponent = 4.0;   // ground-to-air path loss exponent
  double ue_power_w = 1.0;          // UE transmit power
  double uav_power_w = 5.0;         // UAV transmit power
  double noise_w = 1.0e-16;         // AWGN variance (-130 dBm)
  double ref_pathloss = 1.0e-6;     // path loss at 1 m reference distance
  int ris_rows = 10;                // RIS panel rows
  int ris_cols = 10;                // RIS panel columns
  double row_spacing_m = 0.05;      // element spacing along rows
  double col_spacing_m = 0.05;      // element spacing along columns
  double thr_ue_uav_db = 85.0;      // min SNR for a direct UE-UAV link
  double thr_uav_uav_db = 80.0;     // min SNR for a UAV-UAV link
  double thr_ris_db = 30.0;         // min SNR for a reflected UE-RIS-UAV link
  double ris_reach_m = 212.13203435596427;  // UE-RIS pairing range; defaults
                                            // to the 150x150 m area diagonal
                                            // so it does not bind
  double epsilon = 1.0e-5;          // clamp floor for criticality

  int elements() const { return ris_rows * ris_cols; }
  double wavelength() const { return lightspeed_m_s / carrier_freq_hz; }

  void validate() const {
    auto need_positive = [](double v, const char* name) {
      if (!(v > 0.0)) {
        throw std::invalid_argument(std::string("RadioParams: ") + name + " must be > 0");
      }
    };
    need_positive(carrier_freq_hz, "carrier_freq_hz");
    need_positive(lightspeed_m_s, "lightspeed_m_s");
    need_positive(pathloss_exponent, "pathloss_exponent");
    need_positive(ue_power_w, "ue_power_w");
    need_positive(uav_power_w, "uav_power_w");
    need_positive(noise_w, "noise_w");
    need_positive(ref_pathloss, "ref_pathloss");
    need_positive(row_spacing_m, "row_spacing_m");
    need_positive(col_spacing_m, "col_spacing_m");
    need_positive(ris_reach_m, "ris_reach_m");
    need_positive(epsilon, "epsilon");
    if (ris_rows < 1 || ris_cols < 1) {
      throw std::invalid_argument("RadioParams: RIS panel needs at least one element");
    }
    for (double t : {thr_ue_uav_db, thr_uav_uav_db, thr_ris_db}) {
      if (!std::isfinite(t)) throw std::invalid_argument("RadioParams: SNR threshold not finite");
    }
  }
};

/// Immutable placement of all nodes plus the radio parameters. Graph node
/// indices are fixed by construction: UEs occupy 0..U-1, UAVs U..U+A-1.
/// RISs are passive and never appear as graph nodes.
struct Scenario {
  std::vector<Point3> ues;   // ground nodes, z = 0
  std::vector<Point3> uavs;
  std::vector<Point3> riss;
  RadioParams params;
  std::uint64_t seed = 0;

  int ue_count() const { return static_cast<int>(ues.size()); }
  int uav_count() const { return static_cast<int>(uavs.size()); }
  int ris_count() const { return static_cast<int>(riss.size()); }
  int node_count() const { return ue_count() + uav_count(); }

  int ue_node(int u) const { return u; }
  int uav_node(int a) const { return ue_count() + a; }
};

/// Draws UE and UAV positions i.i.d. uniform over the area; UEs at ground
/// level, UAVs at uav_alt_m. RISs are placed on a Halton sequence over the
/// area at ris_alt_m, so the first k RIS positions are identical for every
/// ris_count >= k (sweeps over ris_count grow the candidate set instead of
/// reshuffling it). Deterministic for a fixed seed.
inline Scenario generate_random(std::uint64_t seed, int ue_count, int uav_count, int ris_count,
                                double area_w_m, double area_h_m, double uav_alt_m,
                                double ris_alt_m, const RadioParams& params) {
  if (ue_count < 1 || uav_count < 1 || ris_count < 0) {
    throw std::invalid_argument("generate_random: need at least one UE and one UAV");
  }
  if (!(area_w_m > 0.0) || !(area_h_m > 0.0)) {
    throw std::invalid_argument("generate_random: area must have positive width and height");
  }
  params.validate();

  Scenario s;
  s.params = params;
  s.seed = seed;
  Rng rng(seed);
  s.ues.reserve(ue_count);
  for (int u = 0; u < ue_count; ++u) {
    const double x = rng.uniform(0.0, area_w_m);
    const double y = rng.uniform(0.0, area_h_m);
    s.ues.push_back({x, y, 0.0});
  }
  s.uavs.reserve(uav_count);
  for (int a = 0; a < uav_count; ++a) {
    const double x = rng.uniform(0.0, area_w_m);
    const double y = rng.uniform(0.0, area_h_m);
    s.uavs.push_back({x, y, uav_alt_m});
  }
  s.riss.reserve(ris_count);
  for (int r = 0; r < ris_count; ++r) {
    const auto k = static_cast<std::uint64_t>(r) + 1;
    s.riss.push_back({halton(k, 2) * area_w_m, halton(k, 3) * area_h_m, ris_alt_m});
  }
  return s;
}

}  // namespace risconn
