//------------------------------------------------------------------------------
//
//   Copyright 2026 The tanglefl Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace tanglefl {

/// 32-byte SHA-256 output.
using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 over an arbitrary byte sequence.
Digest sha256(std::span<std::uint8_t const> bytes);

std::string to_hex(Digest const &digest);

/// Parses 64 hex characters (either case). Throws std::invalid_argument otherwise.
Digest digest_from_hex(std::string_view hex);

}  // namespace tanglefl
