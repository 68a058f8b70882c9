#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "risconn/geometry.hpp"
#include "risconn/scenario.hpp"

namespace risconn {

/// Thrown when the horizontal separation of a hop is zero and the array
/// response angles are undefined (node exactly above/below a RIS).
struct DegenerateGeometryError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Direct UE->UAV SNR as a linear ratio: d^-alpha * p / N0.
/// Threshold comparisons happen in dB at the caller.
inline double snr_ue_uav(double d_ua_m, const RadioParams& p) {
  if (!(d_ua_m > 0.0)) throw std::invalid_argument("snr_ue_uav: distance must be > 0");
  return std::pow(d_ua_m, -p.pathloss_exponent) * p.ue_power_w / p.noise_w;
}

/// UAV->UAV SNR in dB: 10*log10(P) - Gamma - 10*log10(N0) with the free-space
/// path loss Gamma = 20*log10(4*pi*f_c*d/c).
inline double snr_uav_uav_db(double d_aa_m, const RadioParams& p) {
  if (!(d_aa_m > 0.0)) throw std::invalid_argument("snr_uav_uav_db: distance must be > 0");
  const double gamma_db =
      20.0 * std::log10(2.0 * kTwoPi * p.carrier_freq_hz * d_aa_m / p.lightspeed_m_s);
  return 10.0 * std::log10(p.uav_power_w) - gamma_db - 10.0 * std::log10(p.noise_w);
}

/// Direction triplet entering the array response phases. phi/varphi are the
/// horizontal cosine terms, psi the vertical one.
struct HopAngles {
  double phi = 0.0;
  double varphi = 0.0;
  double psi = 0.0;
};

// UE->RIS arrival angles. The vertical term uses the RIS altitude (UEs are
// ground nodes).
inline HopAngles angles_ue_ris(const Point3& ue, const Point3& ris) {
  const double h = horizontal_distance(ue, ris);
  if (!(h > 0.0)) {
    throw DegenerateGeometryError("UE-RIS hop: zero horizontal separation, angles undefined");
  }
  const double d = distance(ue, ris);
  return {(ue.y - ris.y) / h, (ris.x - ue.x) / h, -ris.z / d};
}

// RIS->UAV departure angles.
inline HopAngles angles_ris_uav(const Point3& ris, const Point3& uav) {
  const double h = horizontal_distance(ris, uav);
  if (!(h > 0.0)) {
    throw DegenerateGeometryError("RIS-UAV hop: zero horizontal separation, angles undefined");
  }
  const double d = distance(ris, uav);
  return {(ris.y - uav.y) / h, (ris.x - uav.x) / h, (ris.z - uav.z) / d};
}

/// Unit-modulus response of the M_b x M_c panel for one hop. Entry
/// (m_b, m_c) sits at index m_b*M_c + m_c and carries the phase
/// -2*pi/lambda * (d_b*m_b*phi*psi + d_c*m_c*varphi*psi); the vector is the
/// Kronecker product of the row and column progressions.
struct ArrayResponse {
  Eigen::VectorXcd entries;
  HopAngles angles;
};

namespace detail {

inline ArrayResponse array_response(const HopAngles& ang, const RadioParams& p) {
  const int mb = p.ris_rows;
  const int mc = p.ris_cols;
  const double row_step = kTwoPi / p.wavelength() * p.row_spacing_m * ang.phi * ang.psi;
  const double col_step = kTwoPi / p.wavelength() * p.col_spacing_m * ang.varphi * ang.psi;
  ArrayResponse out;
  out.angles = ang;
  out.entries.resize(static_cast<Eigen::Index>(mb) * mc);
  for (int b = 0; b < mb; ++b) {
    for (int c = 0; c < mc; ++c) {
      const double phase = row_step * b + col_step * c;
      out.entries[static_cast<Eigen::Index>(b) * mc + c] =
          std::complex<double>(std::cos(phase), -std::sin(phase));
    }
  }
  return out;
}

}  // namespace detail

inline ArrayResponse array_response_ue_ris(const Point3& ue, const Point3& ris,
                                           const RadioParams& p) {
  return detail::array_response(angles_ue_ris(ue, ris), p);
}

inline ArrayResponse array_response_ris_uav(const Point3& ris, const Point3& uav,
                                            const RadioParams& p) {
  return detail::array_response(angles_ris_uav(ris, uav), p);
}

/// LoS channel vector h = sqrt(beta0/d^2) * array response, so
/// ||h||^2 = M * beta0 / d^2.
inline Eigen::VectorXcd channel_ue_ris(const Point3& ue, const Point3& ris,
                                       const RadioParams& p) {
  const double d = distance(ue, ris);
  if (!(d > 0.0)) throw std::invalid_argument("channel_ue_ris: distance must be > 0");
  return std::sqrt(p.ref_pathloss / (d * d)) * array_response_ue_ris(ue, ris, p).entries;
}

inline Eigen::VectorXcd channel_ris_uav(const Point3& ris, const Point3& uav,
                                        const RadioParams& p) {
  const double d = distance(ris, uav);
  if (!(d > 0.0)) throw std::invalid_argument("channel_ris_uav: distance must be > 0");
  return std::sqrt(p.ref_pathloss / (d * d)) * array_response_ris_uav(ris, uav, p).entries;
}

/// Per-element RIS phase shifts, wrapped into [0, 2*pi).
struct PhaseConfig {
  std::vector<double> thetas;
  int ris_index = -1;
  int ue_index = -1;
  int uav_index = -1;
};

/// Concatenated UE-RIS-UAV channel (h_ra)^H * diag(e^{j theta}) * h_ur.
inline std::complex<double> cascaded_channel(const Eigen::VectorXcd& h_ra,
                                             const PhaseConfig& theta,
                                             const Eigen::VectorXcd& h_ur) {
  const auto m = h_ra.size();
  if (h_ur.size() != m || static_cast<Eigen::Index>(theta.thetas.size()) != m) {
    throw std::invalid_argument("cascaded_channel: vector lengths must all equal M");
  }
  std::complex<double> acc(0.0, 0.0);
  for (Eigen::Index k = 0; k < m; ++k) {
    const std::complex<double> shift(std::cos(theta.thetas[k]), std::sin(theta.thetas[k]));
    acc += std::conj(h_ra[k]) * shift * h_ur[k];
  }
  return acc;
}

/// SNR of the reflected link: p * |h|^2 / N0 (linear ratio).
inline double snr_reflected(std::complex<double> h_cascaded, const RadioParams& p) {
  return p.ue_power_w * std::norm(h_cascaded) / p.noise_w;
}

/// Phase shifts that align every element of the cascaded sum: element
/// (m_b, m_c) gets theta = 2*pi/lambda * (d_b*m_b*(phiUR*psiUR - phiRA*psiRA)
/// + d_c*m_c*(varphiUR*psiUR - varphiRA*psiRA)), which cancels the combined
/// per-element phase of the two hops exactly. With these shifts
/// |cascaded_channel| = M * beta0 / (d_UR * d_RA), the coherent maximum.
inline PhaseConfig optimal_phases(const Point3& ue, const Point3& ris, const Point3& uav,
                                  const RadioParams& p) {
  const HopAngles ur = angles_ue_ris(ue, ris);
  const HopAngles ra = angles_ris_uav(ris, uav);
  const double row_step =
      kTwoPi / p.wavelength() * p.row_spacing_m * (ur.phi * ur.psi - ra.phi * ra.psi);
  const double col_step =
      kTwoPi / p.wavelength() * p.col_spacing_m * (ur.varphi * ur.psi - ra.varphi * ra.psi);
  PhaseConfig out;
  out.thetas.resize(static_cast<std::size_t>(p.elements()));
  for (int b = 0; b < p.ris_rows; ++b) {
    for (int c = 0; c < p.ris_cols; ++c) {
      out.thetas[static_cast<std::size_t>(b) * p.ris_cols + c] =
          wrap_two_pi(row_step * b + col_step * c);
    }
  }
  return out;
}

/// Reflected SNR in dB for a full (UE, RIS, UAV) triple under the coherent
/// phase configuration.
inline double reflected_snr_db(const Point3& ue, const Point3& ris, const Point3& uav,
                               const RadioParams& p, const PhaseConfig& theta) {
  const auto h_ur = channel_ue_ris(ue, ris, p);
  const auto h_ra = channel_ris_uav(ris, uav, p);
  return db_from_linear(snr_reflected(cascaded_channel(h_ra, theta, h_ur), p));
}

}  // namespace risconn
