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

#include <stdexcept>
#include <string>

namespace tris {

enum class ErrorCode {
  invalid_argument,
  parse,
  geometry,
  infeasible,
  io,
  too_large,
  internal,
};

const char* error_code_name(ErrorCode code) noexcept;

// All library failures surface as tris::Error; the C API maps the code onto
// tris_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace tris
