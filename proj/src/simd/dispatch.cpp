// Copyright 2026 The cfx Authors
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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>

#include "arch.hpp"
#include "cfx/common.hpp"
#include "cfx/simd/kernels.hpp"

namespace cfx::simd {

namespace {

constexpr Kernels kScalarKernels{&scalar::dot, &scalar::axpy, &scalar::scale,
                                 &scalar::gemv};
#ifdef CFX_HAVE_AVX2_KERNELS
constexpr Kernels kAvx2Kernels{&avx2::dot, &avx2::axpy, &avx2::scale,
                               &avx2::gemv};
#endif
#ifdef CFX_HAVE_NEON_KERNELS
constexpr Kernels kNeonKernels{&neon::dot, &neon::axpy, &neon::scale,
                               &neon::gemv};
#endif

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
#ifdef CFX_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::kNeon:
#ifdef CFX_HAVE_NEON_KERNELS
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend detect() {
  if (const char* env = std::getenv("CFX_SIMD")) {
    const std::string want(env);
    for (Backend b : available_backends()) {
      if (backend_name(b) == want) return b;
    }
  }
  if (cpu_supports(Backend::kAvx2)) return Backend::kAvx2;
  if (cpu_supports(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

std::atomic<Backend>& active() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (cpu_supports(b)) out.push_back(b);
  }
  return out;
}

Backend active_backend() { return active().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!cpu_supports(b)) {
    throw ConfigError("SIMD backend unavailable: " +
                      std::string(backend_name(b)));
  }
  active().store(b, std::memory_order_relaxed);
}

const Kernels& kernels_for(Backend b) {
  switch (b) {
#ifdef CFX_HAVE_AVX2_KERNELS
    case Backend::kAvx2:
      return kAvx2Kernels;
#endif
#ifdef CFX_HAVE_NEON_KERNELS
    case Backend::kNeon:
      return kNeonKernels;
#endif
    default:
      return kScalarKernels;
  }
}

const Kernels& kernels() { return kernels_for(active_backend()); }

}  // namespace cfx::simd
