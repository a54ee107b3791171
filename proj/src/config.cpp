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

#include "tris/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "tris/error.hpp"

namespace tris {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::geometry: return "geometry";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::io: return "io";
    case ErrorCode::too_large: return "too_large";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) fail(ErrorCode::internal, "double formatting failed");
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    fail(ErrorCode::parse, "not a number: '" + std::string(text) + "'");
  return value;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    fail(ErrorCode::parse, "not an integer: '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
    fail(ErrorCode::parse, "not an unsigned integer: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(parse_double(item));
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

Vec3 parse_vec3(std::string_view text) {
  const auto parts = parse_list(text);
  if (parts.size() != 3) fail(ErrorCode::parse, "expected x,y,z: '" + std::string(text) + "'");
  return {parts[0], parts[1], parts[2]};
}

std::string format_vec3(const Vec3& p) {
  return format_double(p.x) + ',' + format_double(p.y) + ',' + format_double(p.z);
}

namespace {

struct KeyHandler {
  std::string_view name;
  std::function<void(SystemConfig&, std::string_view)> set;
  std::function<std::string(const SystemConfig&)> get;
};

template <class T>
KeyHandler int_key(std::string_view name, T SystemConfig::*member) {
  return {name, [member](SystemConfig& c, std::string_view v) { c.*member = parse_int(v); },
          [member](const SystemConfig& c) { return std::to_string(c.*member); }};
}

KeyHandler real_key(std::string_view name, double SystemConfig::*member) {
  return {name, [member](SystemConfig& c, std::string_view v) { c.*member = parse_double(v); },
          [member](const SystemConfig& c) { return format_double(c.*member); }};
}

KeyHandler list_key(std::string_view name, std::vector<double> SystemConfig::*member) {
  return {name, [member](SystemConfig& c, std::string_view v) { c.*member = parse_list(v); },
          [member](const SystemConfig& c) { return format_list(c.*member); }};
}

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> table = {
      int_key("num_users", &SystemConfig::num_users),
      int_key("num_subcarriers", &SystemConfig::num_subcarriers),
      int_key("ris_rows", &SystemConfig::ris_rows),
      int_key("ris_cols", &SystemConfig::ris_cols),
      real_key("element_spacing_c", &SystemConfig::element_spacing_c),
      real_key("element_spacing_r", &SystemConfig::element_spacing_r),
      real_key("total_bandwidth", &SystemConfig::total_bandwidth),
      real_key("carrier_freq", &SystemConfig::carrier_freq),
      real_key("noise_psd", &SystemConfig::noise_psd),
      list_key("max_power", &SystemConfig::max_power),
      list_key("ber_target", &SystemConfig::ber_target),
      list_key("min_rate", &SystemConfig::min_rate),
      real_key("pathloss_exp", &SystemConfig::pathloss_exp),
      real_key("ref_gain", &SystemConfig::ref_gain),
      real_key("rician_factor", &SystemConfig::rician_factor),
      {"ris_position", [](SystemConfig& c, std::string_view v) { c.ris_position = parse_vec3(v); },
       [](const SystemConfig& c) { return format_vec3(c.ris_position); }},
      real_key("antenna_offset", &SystemConfig::antenna_offset),
      {"user_positions",
       [](SystemConfig& c, std::string_view v) {
         c.user_positions.clear();
         if (trim(v).empty()) return;
         for (auto item : split(v, ';'))
           if (!item.empty()) c.user_positions.push_back(parse_vec3(item));
       },
       [](const SystemConfig& c) {
         std::string out;
         for (std::size_t i = 0; i < c.user_positions.size(); ++i) {
           if (i) out += ';';
           out += format_vec3(c.user_positions[i]);
         }
         return out;
       }},
      real_key("user_area_side", &SystemConfig::user_area_side),
      {"rng_seed", [](SystemConfig& c, std::string_view v) { c.rng_seed = parse_u64(v); },
       [](const SystemConfig& c) { return std::to_string(c.rng_seed); }},
  };
  return table;
}

const KeyHandler& find_handler(std::string_view key) {
  for (const auto& h : handlers())
    if (h.name == key) return h;
  fail(ErrorCode::invalid_argument, "unknown configuration key '" + std::string(key) + "'");
}

void check_per_user(const std::vector<double>& values, int users, const char* name) {
  if (values.size() != 1 && values.size() != static_cast<std::size_t>(users))
    fail(ErrorCode::invalid_argument,
         std::string(name) + " must hold 1 or num_users values");
}

}  // namespace

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> keys;
  for (const auto& h : handlers()) keys.push_back(h.name);
  return keys;
}

void set_config_value(SystemConfig& cfg, std::string_view key, std::string_view value) {
  find_handler(trim(key)).set(cfg, trim(value));
}

std::string get_config_value(const SystemConfig& cfg, std::string_view key) {
  return find_handler(trim(key)).get(cfg);
}

void SystemConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::invalid_argument, what);
  };
  require(num_users >= 1, "num_users must be >= 1");
  require(num_subcarriers >= 1, "num_subcarriers must be >= 1");
  require(ris_rows >= 1 && ris_cols >= 1, "RIS dimensions must be >= 1");
  require(element_spacing_c >= 0.0 && element_spacing_r >= 0.0, "element spacing must be >= 0 (0 = half wavelength)");
  require(total_bandwidth > 0.0, "total_bandwidth must be > 0");
  require(carrier_freq > 0.0, "carrier_freq must be > 0");
  require(noise_psd > 0.0, "noise_psd must be > 0");
  require(pathloss_exp > 0.0, "pathloss_exp must be > 0");
  require(ref_gain > 0.0, "ref_gain must be > 0");
  require(rician_factor >= 0.0, "rician_factor must be >= 0");
  require(antenna_offset > 0.0, "antenna_offset must be > 0");
  require(user_area_side > 0.0, "user_area_side must be > 0");
  check_per_user(max_power, num_users, "max_power");
  check_per_user(ber_target, num_users, "ber_target");
  check_per_user(min_rate, num_users, "min_rate");
  for (int k = 0; k < num_users; ++k) {
    require(user_max_power(k) > 0.0, "max_power must be > 0");
    const double ber = user_ber(k);
    require(ber > 0.0 && ber < 0.2, "ber_target must lie in (0, 0.2)");
    require(user_min_rate(k) >= 0.0, "min_rate must be >= 0");
  }
  require(user_positions.empty() || user_positions.size() == static_cast<std::size_t>(num_users),
          "user_positions must be empty or hold num_users entries");
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": expected key = value");
    try {
      set_config_value(cfg, view.substr(0, eq), view.substr(eq + 1));
    } catch (const Error& e) {
      fail(ErrorCode::parse, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config file '" + path + "'");
  return parse_config(in);
}

void write_config(const SystemConfig& cfg, std::ostream& out) {
  for (const auto& h : handlers()) out << h.name << " = " << h.get(cfg) << '\n';
}

}  // namespace tris
