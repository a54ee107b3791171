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

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "tris/config.hpp"

namespace tris {

using cdouble = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

// splitmix64 finalizer; derives independent stream seeds from (seed, tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

cdouble complex_gaussian(Rng& rng);  // CN(0, 1)

// Far-field / near-field boundary 2 D^2 / lambda.
double rayleigh_distance(double aperture, double wavelength);

// Diagonal aperture of the UPA: sqrt(((M_c-1) d_c)^2 + ((M_r-1) d_r)^2).
double array_aperture(const SystemConfig& cfg);

struct ArrivalAngles {
  double theta = 0.0;  // off-broadside (vertical) angle
  double psi = 0.0;    // azimuth in the array plane
};

// The RIS faces -z towards the user plane. With d = user - ris,
// theta = acos(-d_z / |d|) and psi = atan2(d_y, d_x), so that
// sin(theta) cos(psi) = d_x/|d| and sin(theta) sin(psi) = d_y/|d|.
ArrivalAngles arrival_angles(const Vec3& ris, const Vec3& user);

// Element (m_c, m_r) lives at index m_r * M_c + m_c: the row ramp (length
// M_r) is the outer Kronecker factor and the column ramp (length M_c) the
// inner one.
inline int element_index(int m_c, int m_r, int ris_rows) { return m_r * ris_rows + m_c; }

CVector upa_steering(double theta, double psi, const SystemConfig& cfg);

// Rician user->RIS vector on subcarrier n. `los` is the unit-modulus steering
// vector of the user; the NLoS part is drawn from rng.
CVector far_field_channel(const CVector& los, double user_distance, int n, const SystemConfig& cfg, Rng& rng);

// Element offsets delta_m = (2m - M - 1)/2 for m = 1..M.
std::vector<double> element_offsets(int count);

// Spherical-wave RIS->antenna vector on subcarrier n (LoS only, gain rho).
CVector near_field_channel(int n, cdouble rho, const SystemConfig& cfg);

// SNR-gap of M-QAM at the given bit error rate, natural logarithm.
double modulation_gap(double ber);

struct LinkQuality {
  double snr = 0.0;
  double rate = 0.0;  // bit/s
};

LinkQuality snr_and_rate(double power, const CVector& cascaded, const CVector& coefficient, double gap,
                         const SystemConfig& cfg);

// Immutable after generate_channel(); safe to share across threads.
struct ChannelRealization {
  int num_users = 0;
  int num_subcarriers = 0;
  int num_elements = 0;
  std::vector<CVector> g;  // user->RIS, index k * N + n
  std::vector<CVector> h;  // RIS->antenna, index n
  std::vector<CVector> v;  // cascaded, v^H c = h^H diag(g) c
  std::vector<double> gap;
  std::vector<double> user_distance;
  std::vector<Vec3> user_positions;
  cdouble rho{1.0, 0.0};
  double rayleigh = 0.0;

  const CVector& user_channel(int k, int n) const { return g[static_cast<std::size_t>(k * num_subcarriers + n)]; }
  const CVector& cascaded(int k, int n) const { return v[static_cast<std::size_t>(k * num_subcarriers + n)]; }
};

// v_{k,n} = h_n o conj(g_{k,n}) so that v^H c = sum_m conj(h_m) g_m c_m.
void cascade(ChannelRealization& real);

std::vector<Vec3> draw_user_positions(const SystemConfig& cfg, Rng& rng);

// Pure function of (cfg, seed). Streams are split per purpose and per user so
// scenarios that differ only in K, N or p_max share their common draws.
ChannelRealization generate_channel(const SystemConfig& cfg, std::uint64_t seed);

// CSV with header k,n,m,re_g,im_g,re_h,im_h.
void write_channel_csv(const ChannelRealization& real, std::ostream& out);

}  // namespace tris
