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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "voxid/errors.hpp"
#include "voxid/features.hpp"

using namespace voxid;

namespace {

mfcc::AcousticVector vec(std::initializer_list<double> coeffs) {
    mfcc::AcousticVector v;
    v.coeffs = coeffs;
    return v;
}

}  // namespace

TEST_CASE("identical vectors summarize to zero spread") {
    std::vector<mfcc::AcousticVector> vectors(5, vec({1.5, -2.0, 0.25}));
    const features::UtteranceFeatures f = features::summarize(vectors);
    REQUIRE(f.dim() == 6);
    CHECK(f.values[0] == doctest::Approx(1.5));
    CHECK(f.values[1] == doctest::Approx(-2.0));
    CHECK(f.values[2] == doctest::Approx(0.25));
    CHECK(f.values[3] == 0.0);
    CHECK(f.values[4] == 0.0);
    CHECK(f.values[5] == 0.0);
}

TEST_CASE("population standard deviation of {1, 3} is 1") {
    std::vector<mfcc::AcousticVector> vectors{vec({1.0}), vec({3.0})};
    const features::UtteranceFeatures f = features::summarize(vectors);
    CHECK(f.values[0] == doctest::Approx(2.0));
    CHECK(f.values[1] == doctest::Approx(1.0));
}

TEST_CASE("a single frame yields zero deviation, not NaN") {
    std::vector<mfcc::AcousticVector> vectors{vec({4.0, 5.0})};
    const features::UtteranceFeatures f = features::summarize(vectors);
    CHECK(f.values[2] == 0.0);
    CHECK(f.values[3] == 0.0);
}

TEST_CASE("summarize validates its input") {
    CHECK_THROWS_AS(features::summarize({}), EmptyUtterance);
    std::vector<mfcc::AcousticVector> ragged{vec({1.0, 2.0}), vec({1.0})};
    CHECK_THROWS_AS(features::summarize(ragged), RaggedVectors);
}

TEST_CASE("summarize is permutation invariant and duration independent") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<mfcc::AcousticVector> vectors;
    for (int i = 0; i < 97; ++i) {
        mfcc::AcousticVector v;
        v.coeffs.resize(19);
        for (double& c : v.coeffs) c = gauss(rng);
        vectors.push_back(std::move(v));
    }
    const features::UtteranceFeatures a = features::summarize(vectors);
    CHECK(a.dim() == 38);

    std::shuffle(vectors.begin(), vectors.end(), rng);
    const features::UtteranceFeatures b = features::summarize(vectors);
    for (std::size_t i = 0; i < a.dim(); ++i)
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));

    // Long-double two-pass recomputation as an independent check.
    for (std::size_t d = 0; d < 19; ++d) {
        long double mean = 0.0L;
        for (const auto& v : vectors) mean += v.coeffs[d];
        mean /= vectors.size();
        long double var = 0.0L;
        for (const auto& v : vectors) {
            const long double delta = v.coeffs[d] - mean;
            var += delta * delta;
        }
        var /= vectors.size();
        CHECK(b.values[d] == doctest::Approx(double(mean)).epsilon(1e-9));
        CHECK(b.values[19 + d] ==
              doctest::Approx(double(sqrtl(var))).epsilon(1e-9));
    }
}

TEST_CASE("standardizer fit and apply") {
    features::LabeledDataset dataset;
    dataset.feature_dim = 1;
    dataset.rows.push_back({features::UtteranceFeatures{{0.0}}, 1});
    dataset.rows.push_back({features::UtteranceFeatures{{2.0}}, 2});
    const features::Standardizer scaler = features::fit_standardizer(dataset);
    CHECK(scaler.mean[0] == doctest::Approx(1.0));
    CHECK(scaler.std_dev[0] == doctest::Approx(1.0));

    // Constant dimensions store a std of 1 so the transform stays defined.
    features::LabeledDataset constant;
    constant.feature_dim = 2;
    constant.rows.push_back({features::UtteranceFeatures{{3.0, 1.0}}, 1});
    constant.rows.push_back({features::UtteranceFeatures{{3.0, 2.0}}, 2});
    const features::Standardizer s2 = features::fit_standardizer(constant);
    CHECK(s2.std_dev[0] == 1.0);

    CHECK_THROWS_AS(features::fit_standardizer(features::LabeledDataset{}),
                    EmptyDataset);
}

TEST_CASE("standardized data has zero mean and unit spread") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss(3.0, 7.0);
    features::LabeledDataset dataset;
    dataset.feature_dim = 6;
    for (int r = 0; r < 160; ++r) {
        features::LabeledRow row;
        row.label = r % 8 + 1;
        row.features.values.resize(6);
        for (double& v : row.features.values) v = gauss(rng);
        dataset.rows.push_back(std::move(row));
    }
    const features::Standardizer scaler = features::fit_standardizer(dataset);
    std::vector<double> mean(6, 0.0), var(6, 0.0);
    for (const auto& row : dataset.rows) {
        const auto scaled = scaler.apply(row.features);
        for (std::size_t d = 0; d < 6; ++d) {
            mean[d] += scaled.values[d];
            var[d] += scaled.values[d] * scaled.values[d];
        }
    }
    for (std::size_t d = 0; d < 6; ++d) {
        CHECK(std::abs(mean[d] / 160.0) < 1e-9);
        CHECK(std::abs(var[d] / 160.0 - 1.0) < 1e-9);
    }
}

TEST_CASE("apply/invert round trip and identity scaler") {
    features::Standardizer scaler;
    scaler.mean = {1.0, -2.0, 0.5};
    scaler.std_dev = {2.0, 0.5, 3.0};

    const features::UtteranceFeatures at_mean{{1.0, -2.0, 0.5}};
    for (double v : scaler.apply(at_mean).values) CHECK(v == 0.0);

    features::Standardizer identity;
    identity.mean = {0.0, 0.0, 0.0};
    identity.std_dev = {1.0, 1.0, 1.0};
    const features::UtteranceFeatures f{{0.3, 1.7, -9.0}};
    CHECK(identity.apply(f).values == f.values);

    const features::UtteranceFeatures round = scaler.invert(scaler.apply(f));
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(round.values[i] == doctest::Approx(f.values[i]).epsilon(1e-12));

    CHECK_THROWS_AS(scaler.apply(features::UtteranceFeatures{{1.0}}),
                    DimensionMismatch);
}
