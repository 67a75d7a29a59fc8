// Copyright 2026 The Voxid Authors
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
#include <span>

namespace voxid::kernels {

/// Arithmetic kernels behind the DSP and SVM inner loops.
///
/// Every kernel exists as a portable scalar reference implementation and,
/// on x86-64 builds, an AVX2/FMA variant. The backend is picked once at
/// startup from CPUID and can be overridden with VOXID_SIMD=scalar|avx2.
/// Vector variants may reassociate sums, so results can differ from the
/// scalar reference by a few ulps; the equivalence tests pin that bound.

enum class Backend { scalar, avx2 };

/// Backend selected for this process (CPUID probe + VOXID_SIMD override).
Backend active_backend();

const char* backend_name(Backend b);

/// Dispatched entry points.
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// out[i] = a[i] * b[i]
void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);

/// Scalar reference implementations, always available. These are the
/// ground truth the vector variants are tested against.
namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
}  // namespace scalar

#if defined(VOXID_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out);
}  // namespace avx2
#endif

}  // namespace voxid::kernels
