/*
 * volseg: 3D volume resampling and segmentation evaluation toolkit
 *
 * Copyright 2026 The volseg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "volseg/reference.hpp"
#include "volseg/sliding_window.hpp"
#include "test_support.hpp"

using namespace volseg;
using namespace testsup;

TEST_SUITE_BEGIN("sliding_window");

TEST_CASE("window_offsets enumerations") {
  const WindowSpec spec{{192, 192, 32}, {48, 48, 8}};

  const auto exact = window_offsets({192, 192, 32}, spec);
  REQUIRE(exact.size() == 1);
  CHECK(exact[0] == Dims3{0, 0, 0});

  const auto eight = window_offsets({240, 240, 40}, spec);
  REQUIRE(eight.size() == 8);
  std::set<int> xs, zs;
  for (const auto& o : eight) {
    xs.insert(o.x);
    zs.insert(o.z);
  }
  CHECK(xs == std::set<int>{0, 48});
  CHECK(zs == std::set<int>{0, 8});

  const auto clamped = window_offsets({200, 200, 36}, spec);
  REQUIRE(clamped.size() == 8);
  std::set<int> cx, cz;
  for (const auto& o : clamped) {
    cx.insert(o.x);
    cz.insert(o.z);
  }
  CHECK(cx == std::set<int>{0, 8});
  CHECK(cz == std::set<int>{0, 4});

  // lexicographic order
  const auto ordered = window_offsets({240, 240, 40}, spec);
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    const auto& a = ordered[i - 1];
    const auto& b = ordered[i];
    CHECK(std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z));
  }
}

TEST_CASE("window_offsets configuration errors") {
  CHECK_THROWS_AS(window_offsets({100, 100, 20}, {{192, 192, 32}, {48, 48, 8}}),
                  ConfigError);
  CHECK_THROWS_AS(window_offsets({200, 200, 40}, {{192, 192, 32}, {200, 48, 8}}),
                  ConfigError);
  CHECK_THROWS_AS(window_offsets({200, 200, 40}, {{192, 192, 32}, {0, 48, 8}}),
                  ConfigError);
}

TEST_CASE("coverage: every voxel is hit at least once on random specs") {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 50; ++it) {
    const Dims3 dims{int(20 + rng() % 80), int(20 + rng() % 80), int(10 + rng() % 30)};
    const Dims3 window{int(8 + rng() % std::uint64_t(dims.x - 7)),
                       int(8 + rng() % std::uint64_t(dims.y - 7)),
                       int(4 + rng() % std::uint64_t(dims.z - 3))};
    const Dims3 stride{int(1 + rng() % std::uint64_t(window.x)),
                       int(1 + rng() % std::uint64_t(window.y)),
                       int(1 + rng() % std::uint64_t(window.z))};
    const auto offsets = window_offsets(dims, {window, stride});

    // hit counts derived directly from the offset list (independent of
    // the aggregation code)
    std::vector<int> counts(std::size_t(dims.total()), 0);
    for (const auto& off : offsets) {
      for (int k = off.z; k < off.z + window.z; ++k) {
        for (int j = off.y; j < off.y + window.y; ++j) {
          for (int i = off.x; i < off.x + window.x; ++i) {
            ++counts[std::size_t(i) +
                     std::size_t(dims.x) * (std::size_t(j) + std::size_t(dims.y) * std::size_t(k))];
          }
        }
      }
    }
    CHECK(*std::min_element(counts.begin(), counts.end()) >= 1);

    // offsets per axis follow the floor rule (+1 when clamping adds one)
    auto axis_count = [](int dim, int window_, int stride_) {
      const int base = (dim - window_) / stride_ + 1;
      const bool clamps = (dim - window_) % stride_ != 0;
      return base + (clamps ? 1 : 0);
    };
    std::set<int> xs;
    for (const auto& o : offsets) xs.insert(o.x);
    CHECK(int(xs.size()) == axis_count(dims.x, window.x, stride.x));
  }
}

TEST_CASE("constant predictor yields a uniform map at both strides") {
  const Volume3 v = random_volume({240, 220, 40}, {1, 1, 1}, {}, 8);
  const Predictor pred = make_predictor("const:0.7", v);
  for (const Dims3 stride : {Dims3{48, 48, 8}, Dims3{96, 96, 16}}) {
    const Volume3 out = predict_volume(v, pred, {{192, 192, 32}, stride});
    REQUIRE(out.dims == v.dims);
    for (float p : out.voxels) CHECK(std::abs(double(p) - 0.7) < 1e-9);
  }
}

TEST_CASE("echo predictor reproduces the normalized input") {
  const Volume3 v = random_volume({220, 210, 38}, {0.8, 0.8, 3.0}, {2, 3, 4}, 9, -50.0f, 400.0f);
  const float lo = min_value(v), hi = max_value(v);
  const Predictor pred = make_predictor("echo", v);

  const WindowSpec fine{{192, 192, 32}, {48, 48, 8}};
  const WindowSpec coarse{{192, 192, 32}, {96, 96, 16}};
  const Volume3 out_fine = predict_volume(v, pred, fine);
  const Volume3 out_coarse = predict_volume(v, pred, coarse);

  for (std::size_t i = 0; i < v.voxels.size(); ++i) {
    const double expected = (double(v.voxels[i]) - double(lo)) / (double(hi) - double(lo));
    CHECK(std::abs(double(out_fine.voxels[i]) - expected) < 1e-6);
    CHECK(std::abs(double(out_fine.voxels[i]) - double(out_coarse.voxels[i])) < 1e-9);
  }
}

TEST_CASE("predict_and_binarize composition") {
  const Volume3 v = random_volume({64, 64, 16}, {1, 1, 1}, {}, 10);
  const WindowSpec spec{{48, 48, 8}, {24, 24, 4}};

  const Mask3 ones = predict_and_binarize(v, make_predictor("const:0.7", v), spec);
  CHECK(foreground_count(ones) == v.dims.total());

  const Mask3 zeros = predict_and_binarize(v, make_predictor("const:0.3", v), spec);
  CHECK(foreground_count(zeros) == 0);

  Volume3 binary({64, 64, 16}, {1, 1, 1});
  std::mt19937_64 rng(4);
  for (float& x : binary.voxels) x = rng() % 2 ? 1.0f : 0.0f;
  const Mask3 echoed = predict_and_binarize(binary, make_predictor("echo", binary), spec);
  for (std::size_t i = 0; i < binary.voxels.size(); ++i) {
    CHECK(float(echoed.voxels[i]) == binary.voxels[i]);
  }
}

TEST_CASE("threshold predictor hard-labels the echo output") {
  const Volume3 v = random_volume({48, 48, 12}, {1, 1, 1}, {}, 11, 0.0f, 1.0f);
  const Predictor pred = make_predictor("threshold:0.5", v);
  const Volume3 out = predict_volume(v, pred, {{48, 48, 12}, {48, 48, 12}});
  for (float p : out.voxels) CHECK((p == 0.0f || p == 1.0f));
}

TEST_CASE("predictor contract violations name the offset") {
  const Volume3 v = random_volume({60, 60, 12}, {1, 1, 1}, {}, 12);
  const WindowSpec spec{{48, 48, 8}, {24, 24, 4}};

  const Predictor wrong_dims = [](const Volume3& patch) {
    return Volume3({patch.dims.x - 1, patch.dims.y, patch.dims.z}, patch.spacing);
  };
  try {
    predict_volume(v, wrong_dims, spec, true);
    FAIL("expected PredictorContractError");
  } catch (const PredictorContractError& e) {
    CHECK(std::string(e.what()).find("(0, 0, 0)") != std::string::npos);
  }

  const Predictor out_of_range = [](const Volume3& patch) {
    Volume3 out(patch.dims, patch.spacing, patch.origin);
    std::fill(out.voxels.begin(), out.voxels.end(), 1.5f);
    return out;
  };
  CHECK_THROWS_AS(predict_volume(v, out_of_range, spec, true), PredictorContractError);
}

TEST_CASE("volumes smaller than the window are padded and cropped back") {
  const Volume3 v = random_volume({50, 60, 20}, {0.9, 0.9, 2.5}, {7, 8, 9}, 13, 1.0f, 2.0f);
  const WindowSpec spec{{64, 64, 32}, {32, 32, 16}};
  const Volume3 out = predict_volume(v, make_predictor("const:0.25", v), spec);
  CHECK(out.dims == v.dims);
  CHECK(out.spacing == v.spacing);
  CHECK(out.origin == v.origin);
  for (float p : out.voxels) CHECK(std::abs(double(p) - 0.25) < 1e-9);
}

TEST_CASE("results are independent of the worker count") {
  const Volume3 v = random_volume({100, 90, 24}, {1, 1, 1}, {}, 14, 0.0f, 300.0f);
  const WindowSpec spec{{64, 64, 16}, {20, 24, 6}};
  const Predictor pred = make_predictor("echo", v);
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const Volume3 a = predict_volume(v, pred, spec);
  omp_set_num_threads(std::max(2, saved));
  const Volume3 b = predict_volume(v, pred, spec);
  omp_set_num_threads(saved);
  CHECK(a.voxels == b.voxels);
#else
  const Volume3 a = predict_volume(v, pred, spec);
  const Volume3 b = predict_volume(v, pred, spec);
  CHECK(a.voxels == b.voxels);
#endif
}

TEST_CASE("parallel predict_volume matches the serial reference") {
  const Volume3 v = random_volume({80, 70, 20}, {1, 1, 2}, {0, 0, 0}, 15, 0.0f, 10.0f);
  const WindowSpec spec{{48, 48, 12}, {30, 20, 7}};
  const Predictor pred = make_predictor("echo", v);
  const Volume3 a = predict_volume(v, pred, spec);
  const Volume3 b = reference::predict_volume(v, pred, spec);
  REQUIRE(a.dims == b.dims);
  for (std::size_t i = 0; i < a.voxels.size(); ++i) {
    CHECK(std::abs(double(a.voxels[i]) - double(b.voxels[i])) < 1e-12);
  }
}

TEST_CASE("unknown and malformed predictor names are rejected") {
  const Volume3 v = random_volume({8, 8, 8}, {1, 1, 1}, {}, 16);
  CHECK_THROWS_AS(make_predictor("net:resnet", v), ConfigError);
  CHECK_THROWS_AS(make_predictor("const:1.5", v), ConfigError);
  CHECK_THROWS_AS(make_predictor("const:abc", v), ConfigError);
}

TEST_SUITE_END();
