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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace tris {

inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Vec3& a, const Vec3& b);

// Scenario parameters, SI units throughout. Per-user vectors (max_power,
// ber_target, min_rate) hold either one value broadcast to every user or
// exactly num_users values.
struct SystemConfig {
  int num_users = 5;
  int num_subcarriers = 20;
  int ris_rows = 5;  // M_c: elements along a column, spacing element_spacing_c
  int ris_cols = 5;  // M_r: elements along a row, spacing element_spacing_r
  double element_spacing_c = 0.0;  // <= 0 selects half a wavelength
  double element_spacing_r = 0.0;
  double total_bandwidth = 20e6;
  double carrier_freq = 3e9;
  double noise_psd = 3.981071705534972e-21;  // -174 dBm/Hz
  std::vector<double> max_power{0.2};
  std::vector<double> ber_target{1e-3};
  std::vector<double> min_rate{10.0};
  double pathloss_exp = 3.0;
  double ref_gain = 1e-3;                     // -30 dB at 1 m
  double rician_factor = 1.9952623149688795;  // 3 dB
  Vec3 ris_position{0.0, 0.0, 15.0};
  double antenna_offset = 0.2;
  std::vector<Vec3> user_positions;  // empty: drawn uniformly over the user square
  double user_area_side = 50.0;
  std::uint64_t rng_seed = 1;

  int num_elements() const { return ris_rows * ris_cols; }
  double subcarrier_bandwidth() const { return total_bandwidth / num_subcarriers; }
  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  double spacing_c() const { return element_spacing_c > 0.0 ? element_spacing_c : 0.5 * wavelength(); }
  double spacing_r() const { return element_spacing_r > 0.0 ? element_spacing_r : 0.5 * wavelength(); }
  double noise_power() const { return noise_psd * subcarrier_bandwidth(); }

  double user_max_power(int k) const { return pick(max_power, k); }
  double user_ber(int k) const { return pick(ber_target, k); }
  double user_min_rate(int k) const { return pick(min_rate, k); }

  // Throws Error(invalid_argument) on any violated range constraint.
  void validate() const;

 private:
  static double pick(const std::vector<double>& values, int k) {
    return values.size() == 1 ? values.front() : values.at(static_cast<std::size_t>(k));
  }
};

// Flat key/value configuration text. One `key = value` per line, `#` starts a
// comment. Lists are comma separated; user positions are `x,y,z;x,y,z;...`.
std::vector<std::string_view> config_keys();
void set_config_value(SystemConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const SystemConfig& cfg, std::string_view key);

SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);
void write_config(const SystemConfig& cfg, std::ostream& out);

// Shortest round-trip decimal text for a double.
std::string format_double(double value);
double parse_double(std::string_view text);
std::string_view trim(std::string_view text);
int parse_int(std::string_view text);
std::uint64_t parse_u64(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);  // items trimmed
std::vector<double> parse_list(std::string_view text);
std::string format_list(const std::vector<double>& values);

}  // namespace tris
