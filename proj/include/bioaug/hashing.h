//
// Copyright 2026 The bioaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef BIOAUG_HASHING_H_
#define BIOAUG_HASHING_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace bioaug {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// Stable 64-bit FNV-1a; used where a platform-independent small hash is
// needed (seed derivation, mock backends).
std::uint64_t fnv1a64(std::string_view data);

// Per-instance seed: independent of worker count and processing order.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key);

}  // namespace bioaug

#endif  // BIOAUG_HASHING_H_
