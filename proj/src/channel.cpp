// SPDX-License-Identifier: Apache-2.0
//
// tris: transmissive RIS uplink OFDMA optimization toolkit
// Copyright (C) 2026 The tris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "tris/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "tris/error.hpp"

namespace tris {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

enum StreamTag : std::uint64_t { kPositions = 1, kNearField = 2, kUserBase = 1000 };

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Box-Muller in polar form: |z|^2 ~ Exp(1), uniform phase. Written out so the
// stream is identical across standard library implementations.
cdouble complex_gaussian(Rng& rng) {
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  const double phase = kTwoPi * uniform01(rng);
  return std::polar(std::sqrt(-std::log(u)), phase);
}

double rayleigh_distance(double aperture, double wavelength) {
  if (!(aperture >= 0.0) || !(wavelength > 0.0))
    fail(ErrorCode::invalid_argument, "rayleigh_distance needs aperture >= 0 and wavelength > 0");
  return 2.0 * aperture * aperture / wavelength;
}

double array_aperture(const SystemConfig& cfg) {
  const double span_c = (cfg.ris_rows - 1) * cfg.spacing_c();
  const double span_r = (cfg.ris_cols - 1) * cfg.spacing_r();
  return std::hypot(span_c, span_r);
}

ArrivalAngles arrival_angles(const Vec3& ris, const Vec3& user) {
  const double dx = user.x - ris.x;
  const double dy = user.y - ris.y;
  const double dz = user.z - ris.z;
  const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (!(r > 0.0)) fail(ErrorCode::geometry, "user coincides with the RIS");
  ArrivalAngles a;
  a.theta = std::acos(std::clamp(-dz / r, -1.0, 1.0));
  a.psi = std::atan2(dy, dx);
  return a;
}

CVector upa_steering(double theta, double psi, const SystemConfig& cfg) {
  const int mc = cfg.ris_rows;
  const int mr = cfg.ris_cols;
  const double k0 = kTwoPi * cfg.carrier_freq / kSpeedOfLight;
  const double row_phase = -k0 * cfg.spacing_r() * std::sin(theta) * std::cos(psi);
  const double col_phase = -k0 * cfg.spacing_c() * std::sin(theta) * std::sin(psi);
  CVector out(mc * mr);
  for (int r = 0; r < mr; ++r)
    for (int c = 0; c < mc; ++c)
      out[element_index(c, r, mc)] = std::polar(1.0, r * row_phase + c * col_phase);
  return out;
}

CVector far_field_channel(const CVector& los, double user_distance, int n, const SystemConfig& cfg, Rng& rng) {
  const double rayleigh = rayleigh_distance(array_aperture(cfg), cfg.wavelength());
  if (!(user_distance > rayleigh))
    fail(ErrorCode::geometry, "user at " + format_double(user_distance) +
                                  " m is inside the Rayleigh distance " + format_double(rayleigh) + " m");
  if (n < 0 || n >= cfg.num_subcarriers) fail(ErrorCode::invalid_argument, "subcarrier index out of range");
  const double kappa = cfg.rician_factor;
  double w_los = 1.0;
  double w_nlos = 0.0;
  if (std::isfinite(kappa)) {
    w_los = std::sqrt(kappa / (1.0 + kappa));
    w_nlos = std::sqrt(1.0 / (1.0 + kappa));
  }
  const double amplitude = std::sqrt(cfg.ref_gain / std::pow(user_distance, cfg.pathloss_exp));
  const cdouble delay = std::polar(1.0, -kTwoPi * n * cfg.subcarrier_bandwidth() * user_distance / kSpeedOfLight);
  CVector out(los.size());
  for (Eigen::Index m = 0; m < los.size(); ++m) {
    const cdouble scatter = complex_gaussian(rng);
    out[m] = amplitude * (w_los * delay * los[m] + w_nlos * scatter);
  }
  return out;
}

std::vector<double> element_offsets(int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int m = 1; m <= count; ++m) out[static_cast<std::size_t>(m - 1)] = (2.0 * m - count - 1.0) / 2.0;
  return out;
}

CVector near_field_channel(int n, cdouble rho, const SystemConfig& cfg) {
  const double r0 = cfg.antenna_offset;
  if (cfg.num_elements() > 1) {
    const double rayleigh = rayleigh_distance(array_aperture(cfg), cfg.wavelength());
    if (!(r0 < rayleigh))
      fail(ErrorCode::geometry, "antenna offset " + format_double(r0) + " m is not inside the Rayleigh distance " +
                                    format_double(rayleigh) + " m");
  }
  const double k0 = kTwoPi * cfg.carrier_freq / kSpeedOfLight;
  const auto dc = element_offsets(cfg.ris_rows);
  const auto dr = element_offsets(cfg.ris_cols);
  const cdouble common = rho * std::polar(1.0, -kTwoPi * n * cfg.subcarrier_bandwidth() * r0 / kSpeedOfLight);
  CVector out(cfg.num_elements());
  for (int r = 0; r < cfg.ris_cols; ++r) {
    for (int c = 0; c < cfg.ris_rows; ++c) {
      const double lateral_sq = dc[c] * dc[c] * cfg.spacing_c() * cfg.spacing_c() +
                                dr[r] * dr[r] * cfg.spacing_r() * cfg.spacing_r();
      const double path = std::sqrt(r0 * r0 + lateral_sq);
      // the LoS vector is defined through a conjugate transpose, hence +j
      out[element_index(c, r, cfg.ris_rows)] = common * std::polar(1.0, k0 * (path - r0));
    }
  }
  return out;
}

double modulation_gap(double ber) {
  if (!(ber > 0.0 && ber < 0.2)) fail(ErrorCode::invalid_argument, "bit error rate must lie in (0, 0.2)");
  return -1.5 / std::log(5.0 * ber);
}

LinkQuality snr_and_rate(double power, const CVector& cascaded, const CVector& coefficient, double gap,
                         const SystemConfig& cfg) {
  if (cascaded.size() != coefficient.size()) fail(ErrorCode::invalid_argument, "vector length mismatch");
  const double w = cfg.subcarrier_bandwidth();
  LinkQuality q;
  q.snr = power * std::norm(cascaded.dot(coefficient)) * gap / (cfg.noise_psd * w);
  q.rate = w * std::log2(1.0 + q.snr);
  return q;
}

void cascade(ChannelRealization& real) {
  const auto pairs = static_cast<std::size_t>(real.num_users * real.num_subcarriers);
  if (real.g.size() != pairs || real.h.size() != static_cast<std::size_t>(real.num_subcarriers))
    fail(ErrorCode::invalid_argument, "cascade: channel tables have the wrong shape");
  real.v.assign(pairs, CVector());
  for (int k = 0; k < real.num_users; ++k) {
    for (int n = 0; n < real.num_subcarriers; ++n) {
      const CVector& g = real.user_channel(k, n);
      const CVector& h = real.h[static_cast<std::size_t>(n)];
      if (g.size() != h.size()) fail(ErrorCode::invalid_argument, "cascade: length mismatch between g and h");
      real.v[static_cast<std::size_t>(k * real.num_subcarriers + n)] = h.cwiseProduct(g.conjugate());
    }
  }
}

std::vector<Vec3> draw_user_positions(const SystemConfig& cfg, Rng& rng) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(cfg.num_users));
  for (int k = 0; k < cfg.num_users; ++k) {
    const double x = (uniform01(rng) - 0.5) * cfg.user_area_side;
    const double y = (uniform01(rng) - 0.5) * cfg.user_area_side;
    out.push_back({x, y, 0.0});
  }
  return out;
}

ChannelRealization generate_channel(const SystemConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ChannelRealization real;
  real.num_users = cfg.num_users;
  real.num_subcarriers = cfg.num_subcarriers;
  real.num_elements = cfg.num_elements();
  real.rayleigh = rayleigh_distance(array_aperture(cfg), cfg.wavelength());

  if (cfg.user_positions.empty()) {
    Rng pos_rng(derive_seed(seed, kPositions));
    real.user_positions = draw_user_positions(cfg, pos_rng);
  } else {
    real.user_positions = cfg.user_positions;
  }

  Rng near_rng(derive_seed(seed, kNearField));
  real.rho = complex_gaussian(near_rng);
  real.h.reserve(static_cast<std::size_t>(cfg.num_subcarriers));
  for (int n = 0; n < cfg.num_subcarriers; ++n) real.h.push_back(near_field_channel(n, real.rho, cfg));

  real.g.reserve(static_cast<std::size_t>(cfg.num_users * cfg.num_subcarriers));
  for (int k = 0; k < cfg.num_users; ++k) {
    const Vec3& user = real.user_positions[static_cast<std::size_t>(k)];
    const double d = distance(cfg.ris_position, user);
    const auto angles = arrival_angles(cfg.ris_position, user);
    const CVector los = upa_steering(angles.theta, angles.psi, cfg);
    Rng user_rng(derive_seed(seed, kUserBase + static_cast<std::uint64_t>(k)));
    for (int n = 0; n < cfg.num_subcarriers; ++n) real.g.push_back(far_field_channel(los, d, n, cfg, user_rng));
    real.user_distance.push_back(d);
    real.gap.push_back(modulation_gap(cfg.user_ber(k)));
  }
  cascade(real);
  return real;
}

void write_channel_csv(const ChannelRealization& real, std::ostream& out) {
  out << "k,n,m,re_g,im_g,re_h,im_h\n";
  for (int k = 0; k < real.num_users; ++k) {
    for (int n = 0; n < real.num_subcarriers; ++n) {
      const CVector& g = real.user_channel(k, n);
      const CVector& h = real.h[static_cast<std::size_t>(n)];
      for (int m = 0; m < real.num_elements; ++m) {
        out << k << ',' << n << ',' << m << ',' << format_double(g[m].real()) << ',' << format_double(g[m].imag())
            << ',' << format_double(h[m].real()) << ',' << format_double(h[m].imag()) << '\n';
      }
    }
  }
}

}  // namespace tris
