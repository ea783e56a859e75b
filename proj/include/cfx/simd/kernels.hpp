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
#pragma once

// Dense double-precision inner loops used by the recommenders: dot products,
// axpy updates and row-major matrix-vector products. Each kernel exists as a
// scalar reference and as vectorized variants (AVX2+FMA on x86-64, NEON on
// AArch64). The active backend is picked once at startup from the CPU
// features, and can be forced with CFX_SIMD=scalar|avx2|neon.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cfx::simd {

enum class Backend { kScalar, kAvx2, kNeon };

std::string_view backend_name(Backend b);

// Backends compiled into this binary and supported by the running CPU.
std::vector<Backend> available_backends();

Backend active_backend();

// Overrides the dispatch. Throws ConfigError if the backend is unavailable.
void set_backend(Backend b);

// Kernel table for one backend. All pointers are non-null.
struct Kernels {
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y = alpha * x
  void (*scale)(double alpha, const double* x, double* y, std::size_t n);
  // out[r] = dot(m[r*cols ..], v) + (bias ? bias[r] : 0) for r < rows
  void (*gemv)(const double* m, const double* v, const double* bias,
               double* out, std::size_t rows, std::size_t cols);
};

const Kernels& kernels_for(Backend b);
const Kernels& kernels();

// Convenience wrappers over the active backend.
inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, const double* v, const double* bias, double* out,
          std::size_t rows, std::size_t cols);
}  // namespace scalar

}  // namespace cfx::simd
