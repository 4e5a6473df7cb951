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

#include <cmath>

#include "volseg/metrics.hpp"
#include "test_support.hpp"

using namespace volseg;
using namespace testsup;

namespace {

Mask3 mask_from(const std::vector<int>& bits, Dims3 d = {2, 2, 2}) {
  Mask3 m(d, {1, 1, 1});
  for (std::size_t i = 0; i < bits.size(); ++i) m.voxels[i] = std::uint8_t(bits[i]);
  return m;
}

Volume3 volume_of(const Mask3& m) {
  Volume3 v(m.dims, m.spacing, m.origin);
  for (std::size_t i = 0; i < m.voxels.size(); ++i) v.voxels[i] = float(m.voxels[i]);
  return v;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("confusion counts by enumeration") {
  const Mask3 a5 = mask_from({1, 1, 1, 1, 1, 0, 0, 0});
  const ConfusionCounts same = confusion(a5, a5);
  CHECK(same.tp == 5);
  CHECK(same.fp == 0);
  CHECK(same.fn == 0);
  CHECK(same.tn == 3);

  const Mask3 ones = mask_from({1, 1, 1, 1, 1, 1, 1, 1});
  const Mask3 zeros = mask_from({0, 0, 0, 0, 0, 0, 0, 0});
  const ConfusionCounts miss = confusion(ones, zeros);
  CHECK(miss.tp == 0);
  CHECK(miss.fn == 8);
  CHECK(miss.fp == 0);
  CHECK(miss.tn == 0);

  const ConfusionCounts mixed = confusion(mask_from({1, 1, 0, 0, 0, 0, 0, 0}),
                                          mask_from({0, 1, 1, 0, 0, 0, 0, 0}));
  CHECK(mixed.tp == 1);
  CHECK(mixed.fn == 1);
  CHECK(mixed.fp == 1);
  CHECK(mixed.tn == 5);

  Mask3 wrong({3, 2, 2}, {1, 1, 1});
  CHECK_THROWS_AS(confusion(a5, wrong), GeometryError);
}

TEST_CASE("dice on hand-checked pairs") {
  const Mask3 a = mask_from({1, 1, 1, 1, 0, 0, 0, 0});
  CHECK(dice(a, a) == 1.0);

  const Mask3 b = mask_from({0, 0, 0, 0, 1, 1, 1, 1});
  CHECK(dice(a, b) == 0.0);

  // |A| = 4, |B| = 4, |A intersect B| = 2
  const Mask3 c = mask_from({0, 0, 1, 1, 1, 1, 0, 0});
  CHECK(dice(a, c) == 0.5);

  const Mask3 empty = mask_from({0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(dice(empty, empty) == 1.0);
}

TEST_CASE("dice is symmetric on random pairs") {
  for (int it = 0; it < 200; ++it) {
    const Mask3 a = random_mask({5, 4, 3}, 1000 + it, 0.4);
    const Mask3 b = random_mask({5, 4, 3}, 2000 + it, 0.6);
    CHECK(dice(a, b) == dice(b, a));
  }
}

TEST_CASE("tversky identities") {
  const Mask3 a = mask_from({1, 1, 1, 1, 0, 0, 0, 0});
  CHECK(tversky(a, a, {1.0, 1.0}) == 1.0);

  // tp=2, fn=2, fp=2 with alpha 0.3, beta 0.7 -> 2/(2+0.6+1.4) = 0.5
  const Mask3 b = mask_from({1, 1, 0, 0, 1, 1, 0, 0});
  CHECK(tversky(a, b, {0.3, 0.7}) == doctest::Approx(0.5).epsilon(1e-12));

  // both empty
  const Mask3 empty = mask_from({0, 0, 0, 0, 0, 0, 0, 0});
  CHECK(tversky(empty, empty, {0.5, 0.5}) == 1.0);

  // alpha = beta = 0 is undefined at tp = 0 against a non-empty mask
  CHECK_THROWS_AS(tversky(a, b, {-0.1, 0.5}), ConfigError);
  const Mask3 disjoint = mask_from({0, 0, 0, 0, 1, 1, 1, 1});
  CHECK_THROWS_AS(tversky(a, disjoint, {0.0, 0.0}), ConfigError);
}

TEST_CASE("tversky(0.5,0.5) relates to dice via 2TI/(1+TI)") {
  for (int it = 0; it < 100; ++it) {
    const Mask3 a = random_mask({6, 5, 4}, 3000 + it, 0.35);
    const Mask3 b = random_mask({6, 5, 4}, 4000 + it, 0.55);
    const double ti = tversky(a, b, {0.5, 0.5});
    const double d = dice(a, b);
    CHECK(std::abs(2.0 * ti / (1.0 + ti) - d) < 1e-12);
  }
}

TEST_CASE("tversky(1,1) equals the set-arithmetic Jaccard oracle") {
  for (int it = 0; it < 100; ++it) {
    const Mask3 a = random_mask({6, 5, 4}, 5000 + it, 0.45);
    const Mask3 b = random_mask({6, 5, 4}, 6000 + it, 0.45);
    CHECK(tversky(a, b, {1.0, 1.0}) == jaccard_oracle(a, b));
  }
}

TEST_CASE("tversky argument-swap duality") {
  for (int it = 0; it < 50; ++it) {
    const Mask3 a = random_mask({5, 5, 3}, 7000 + it, 0.4);
    const Mask3 b = random_mask({5, 5, 3}, 8000 + it, 0.5);
    CHECK(tversky(a, b, {0.3, 0.7}) == tversky(b, a, {0.7, 0.3}));
  }
}

TEST_CASE("bce closed forms") {
  Mask3 y({1, 1, 1}, {1, 1, 1});
  Volume3 p({1, 1, 1}, {1, 1, 1});

  y.voxels[0] = 1;
  p.voxels[0] = 0.5f;
  CHECK(std::abs(bce(p, y) - std::log(2.0)) < 1e-9);

  y.voxels[0] = 0;
  CHECK(std::abs(bce(p, y) - std::log(2.0)) < 1e-9);  // symmetry at p = 0.5

  y.voxels[0] = 1;
  p.voxels[0] = 1.0f;
  CHECK(bce(p, y) <= 1.001e-7);  // clamped perfect prediction

  p.voxels[0] = 1.5f;
  CHECK_THROWS_AS(bce(p, y), DataError);

  Volume3 wrong({2, 1, 1}, {1, 1, 1});
  CHECK_THROWS_AS(bce(wrong, y), GeometryError);
}

TEST_CASE("focal bce closed forms and reduction") {
  Mask3 y({1, 1, 1}, {1, 1, 1});
  Volume3 p({1, 1, 1}, {1, 1, 1});
  y.voxels[0] = 1;
  p.voxels[0] = 0.5f;
  CHECK(std::abs(focal_bce(p, y, {2.0, 1.0, 1e-7}) - 0.25 * std::log(2.0)) < 1e-9);

  p.voxels[0] = 1.0f;
  CHECK(focal_bce(p, y, {2.0, 0.25, 1e-7}) < 1e-9);

  // gamma = 0, alpha = 0.5 halves plain bce exactly
  const Mask3 ym = random_mask({6, 5, 4}, 42, 0.5);
  const Volume3 pm = random_volume({6, 5, 4}, {1, 1, 1}, {}, 43);
  CHECK(std::abs(focal_bce(pm, ym, {0.0, 0.5, 1e-7}) - 0.5 * bce(pm, ym)) < 1e-12);

  CHECK_THROWS_AS(focal_bce(pm, ym, {-1.0, 0.5, 1e-7}), ConfigError);
  CHECK_THROWS_AS(focal_bce(pm, ym, {2.0, 0.0, 1e-7}), ConfigError);
}

TEST_CASE("loss combinations") {
  const Mask3 y = random_mask({6, 5, 4}, 50, 0.4);
  const Volume3 py = volume_of(y);

  CHECK(loss(LossKind::DicePlusBFCE, py, y) < 1e-6);

  // soft Dice on binary probabilities equals 1 - hard dice
  const Mask3 b = random_mask({6, 5, 4}, 51, 0.5);
  const Volume3 pb = volume_of(b);
  CHECK(std::abs(loss(LossKind::Dice, pb, y) - (1.0 - dice(y, binarize(pb, 0.5)))) < 1e-6);

  // Tversky(0.5, 0.5) + BFCE matches Dice + BFCE on binary inputs
  CHECK(std::abs(loss(LossKind::TverskyPlusBFCE, pb, y, {0.5, 0.5}) -
                 loss(LossKind::DicePlusBFCE, pb, y)) < 1e-6);

  // BFCE kind is focal_bce itself
  CHECK(loss(LossKind::BFCE, pb, y) == focal_bce(pb, y, {}));
}

TEST_CASE("rdsc basics") {
  const InterpMode mode = InterpMode::trilinear_threshold(0.5);
  const Mask3 m = sphere_mask({32, 32, 12}, {0.625, 0.625, 3.6}, 10.0);

  CHECK(rdsc(m, ResolutionStrategy::fixed(m.spacing), mode) == 1.0);

  Mask3 empty({16, 16, 8}, {1, 1, 1});
  CHECK(rdsc(empty, ResolutionStrategy::half(), mode) == 1.0);
}

TEST_CASE("rdsc mechanism: doubling resolution beats halving it") {
  // spheres of radius 8, 12, 16 voxels at the median anisotropic spacing
  for (double radius : {8.0, 12.0, 16.0}) {
    const int d = int(2 * radius) + 8;
    const Mask3 m = sphere_mask({d, d, d}, {0.625, 0.625, 3.6}, radius);
    for (const InterpMode& mode :
         {InterpMode::trilinear_threshold(0.5), InterpMode::nearest()}) {
      const double up = rdsc(m, ResolutionStrategy::twice(), mode);
      const double down = rdsc(m, ResolutionStrategy::half(), mode);
      CHECK(up > down);
    }
  }
}

TEST_SUITE_END();
