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

#include <cstddef>

#if defined(__x86_64__) || defined(_M_X64)
#define CFX_HAVE_AVX2_KERNELS 1
namespace cfx::simd::avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, const double* v, const double* bias, double* out,
          std::size_t rows, std::size_t cols);
}  // namespace cfx::simd::avx2
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define CFX_HAVE_NEON_KERNELS 1
namespace cfx::simd::neon {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* m, const double* v, const double* bias, double* out,
          std::size_t rows, std::size_t cols);
}  // namespace cfx::simd::neon
#endif
