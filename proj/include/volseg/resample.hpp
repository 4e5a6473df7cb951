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

#pragma once

#include <string>

#include "volseg/volume.hpp"

namespace volseg {

// Interpolation rules:
//  - Trilinear: weighted average of the 8 surrounding voxel centers,
//    clamp-to-edge inside the half-voxel border, background 0 beyond it.
//  - NearestNeighbor: nearest voxel center, half-integer ties toward the
//    lower index.
//  - TrilinearThenThreshold: trilinear, then >= threshold maps to 1 (for
//    binary masks).
enum class InterpKind { NearestNeighbor, Trilinear, TrilinearThenThreshold };

struct InterpMode {
  InterpKind kind = InterpKind::Trilinear;
  double threshold = 0.5;

  static InterpMode nearest() { return {InterpKind::NearestNeighbor, 0.5}; }
  static InterpMode trilinear() { return {InterpKind::Trilinear, 0.5}; }
  static InterpMode trilinear_threshold(double t = 0.5);
  std::string label() const;
};

// Target-spacing rules for the resolution study. Halving the resolution
// doubles the spacing; doubling the resolution halves it.
enum class StrategyKind { HalfResolution, TwiceResolution, FixedSpacing };

struct ResolutionStrategy {
  StrategyKind kind = StrategyKind::FixedSpacing;
  Spacing3 spacing{};  // FixedSpacing only

  static ResolutionStrategy half() { return {StrategyKind::HalfResolution, {}}; }
  static ResolutionStrategy twice() { return {StrategyKind::TwiceResolution, {}}; }
  static ResolutionStrategy fixed(const Spacing3& s);
  std::string label() const;
};

Spacing3 strategy_target_spacing(const ResolutionStrategy& strategy,
                                 const Spacing3& case_spacing);

// Per axis: n' = ceil(n * s_in / s_out), minimum 1. Never crops content,
// accepting at most one voxel of padding.
Dims3 output_dims(const Dims3& in_dims, const Spacing3& in_spacing,
                  const Spacing3& out_spacing);

// Point samplers. Continuous voxel coordinates within 1e-9 of a multiple
// of one half are snapped to it first, so voxel centers and half-voxel
// ties are evaluated exactly despite world-coordinate round-off.
double sample_trilinear(const Volume3& v, const Vec3& world);
double sample_trilinear(const Mask3& m, const Vec3& world);
float sample_nearest(const Volume3& v, const Vec3& world);
std::uint8_t sample_nearest(const Mask3& m, const Vec3& world);

double sample(const Volume3& v, const Vec3& world, const InterpMode& mode);

// Output grid per output_dims, origin preserved; every output voxel is
// sampled at its world center.
Volume3 resample_to_spacing(const Volume3& v, const Spacing3& out_spacing,
                            const InterpMode& mode);
Volume3 resample_onto(const Volume3& v, const Dims3& dims,
                      const Spacing3& spacing, const Vec3& origin,
                      const InterpMode& mode);

// mode must be NearestNeighbor or TrilinearThenThreshold; plain Trilinear
// would break binarity and raises ConfigError.
Mask3 resample_mask(const Mask3& m, const Spacing3& out_spacing,
                    const InterpMode& mode);
Mask3 resample_mask_onto(const Mask3& m, const Dims3& dims,
                         const Spacing3& spacing, const Vec3& origin,
                         const InterpMode& mode);

// Resample m to target_spacing, then back onto m's exact original grid,
// so the result is comparable voxel-for-voxel with m.
Mask3 reconstruct(const Mask3& m, const Spacing3& target_spacing,
                  const InterpMode& mode);

}  // namespace volseg
