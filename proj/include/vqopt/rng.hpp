// Copyright 2026 The vqopt Authors
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

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vqopt {

using Rng = std::mt19937_64;

/// Independent substreams derived from one master seed.
enum class Stream : std::uint32_t {
  Shots = 1,
  Rotation = 2,
  Optimizer = 3,
  InitialGuess = 4,
  Instance = 5,
};

/// Mixes (master, tag) through std::seed_seq. Distinct tags give streams
/// that do not overlap in practice.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

inline Rng make_rng(std::uint64_t master, Stream stream) {
  return Rng(derive_seed(master, static_cast<std::uint64_t>(stream)));
}

}  // namespace vqopt
