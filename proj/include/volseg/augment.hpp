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

#include <array>
#include <utility>

#include "volseg/rng.hpp"
#include "volseg/volume.hpp"

namespace volseg {

// Online augmentation for image/mask pairs. Every transform applies the
// identical spatial map to both grids: images are sampled trilinearly,
// masks by nearest neighbor, so masks stay strictly binary. Spatial
// transforms resample onto the original grid (no canvas growth) with
// background 0.

struct BsplineParams {
  Dims3 grid{4, 4, 4};      // control points per axis, >= 4 (cubic support)
  double max_disp_mm = 4.0; // per-axis displacement bound
};

struct AugmentConfig {
  std::array<bool, 3> flip_axes_enabled{true, true, true};
  double rot_z_deg_min = -15.0;
  double rot_z_deg_max = 15.0;
  double scale_min = 0.75;
  double scale_max = 1.5;
  BsplineParams bspline;
  Dims3 patch_dims{192, 192, 32};
  double apply_prob = 0.5;  // per-transform application probability
};

using VolumeMaskPair = std::pair<Volume3, Mask3>;

// Voxel arrays reversed along the selected axes; geometry unchanged.
VolumeMaskPair flip(const Volume3& v, const Mask3& m,
                    const std::array<bool, 3>& axes);

// In-plane rotation (degrees, |deg| <= 180) about the volume's xy-center.
VolumeMaskPair rotate_z(const Volume3& v, const Mask3& m, double degrees);

// Zoom about the volume center; factor > 1 magnifies content. The factor
// must lie in the [0.5, 2] guard range.
VolumeMaskPair scale(const Volume3& v, const Mask3& m, double factor);

// Random control-point displacements, uniform in [-max_disp, +max_disp]
// per axis, interpolated to a dense field with cubic B-spline weights;
// backward warping. Deterministic given the rng state.
VolumeMaskPair bspline_deform(const Volume3& v, const Mask3& m,
                              const BsplineParams& p, Rng& rng);

// Uniformly random corner; volumes smaller than the patch are zero-padded
// (at the high side) to patch size first. The patch inherits spacing and
// shifts the origin by corner * spacing.
VolumeMaskPair random_patch(const Volume3& v, const Mask3& m,
                            const Dims3& patch_dims, Rng& rng);

// flip -> rotate -> scale -> bspline, each gated by apply_prob, then
// random_patch. A transform with probability 0 consumes no rng draws, so
// a fully disabled pipeline equals random_patch on the same rng.
VolumeMaskPair augment_sample(const Volume3& v, const Mask3& m,
                              const AugmentConfig& cfg, Rng& rng);

}  // namespace volseg
