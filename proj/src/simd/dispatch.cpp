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

#include <atomic>
#include <cstdlib>
#include <string>

#include "vqopt/errors.hpp"
#include "vqopt/simd/kernels.hpp"

namespace vqopt::simd {
namespace detail {
const KernelTable* avx2_table();
}  // namespace detail

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

bool host_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const KernelTable* avx2 = avx2_kernels();
  const char* env = std::getenv("VQOPT_SIMD");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_kernels();
  if (choice == "avx2" && avx2 == nullptr) {
    throw UnsupportedError("VQOPT_SIMD=avx2 requested but AVX2/FMA is unavailable");
  }
  return avx2 ? avx2 : &scalar_kernels();
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "unknown";
}

NormalStream make_normal_stream(std::uint64_t seed) {
  NormalStream stream;
  std::uint64_t x = seed;
  for (int lane = 0; lane < 4; ++lane) {
    for (int word = 0; word < 4; ++word) stream.state[word * 4 + lane] = splitmix64(x);
  }
  return stream;
}

const KernelTable* avx2_kernels() {
  static const KernelTable* table = host_has_avx2() ? detail::avx2_table() : nullptr;
  return table;
}

bool backend_available(Backend backend) {
  return backend == Backend::Scalar || avx2_kernels() != nullptr;
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

void set_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw UnsupportedError("SIMD backend '" + std::string(backend_name(backend)) +
                           "' is not available on this host");
  }
  active_table().store(backend == Backend::Scalar ? &scalar_kernels() : avx2_kernels(),
                       std::memory_order_release);
}

Backend active_backend() { return kernels().backend; }

}  // namespace vqopt::simd
