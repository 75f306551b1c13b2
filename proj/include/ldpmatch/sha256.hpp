// Copyright 2026 the ldpmatch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace ldpm {

// FIPS 180-4 SHA-256. Self-contained so the simulator has no library
// dependency; the test suite cross-checks it against OpenSSL and the
// standard test vectors.
std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);

std::string hex_digest(const std::array<std::uint8_t, 32>& digest);

}  // namespace ldpm
