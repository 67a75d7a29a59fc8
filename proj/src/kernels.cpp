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

#include "voxid/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace voxid::kernels {

namespace scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    assert(a.size() == b.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
    assert(a.size() == b.size() && a.size() == out.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

}  // namespace scalar

namespace {

struct Dispatch {
    Backend backend;
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*squared_distance)(std::span<const double>, std::span<const double>);
    void (*axpy)(double, std::span<const double>, std::span<double>);
    void (*multiply)(std::span<const double>, std::span<const double>,
                     std::span<double>);
};

Dispatch select_backend() {
    Dispatch d{Backend::scalar, &scalar::dot, &scalar::squared_distance,
               &scalar::axpy, &scalar::multiply};
#if defined(VOXID_HAVE_AVX2)
    bool want_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (const char* env = std::getenv("VOXID_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
        // "avx2" keeps the CPUID result; an unsupported CPU still falls back.
    }
    if (want_avx2) {
        d = Dispatch{Backend::avx2, &avx2::dot, &avx2::squared_distance,
                     &avx2::axpy, &avx2::multiply};
    }
#else
    if (const char* env = std::getenv("VOXID_SIMD")) (void)env;
#endif
    return d;
}

const Dispatch& dispatch() {
    static const Dispatch d = select_backend();
    return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
    return dispatch().dot(a, b);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    return dispatch().squared_distance(a, b);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    dispatch().axpy(a, x, y);
}

void multiply(std::span<const double> a, std::span<const double> b,
              std::span<double> out) {
    dispatch().multiply(a, b, out);
}

}  // namespace voxid::kernels
