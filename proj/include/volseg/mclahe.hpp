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

#include <vector>

#include "volseg/volume.hpp"

namespace volseg {

// Contrast-limited adaptive histogram equalization on 3D volumes.
// Tile histograms are computed over the global min-max range so the
// per-tile mappings are comparable and inter-tile blending is meaningful.
struct ClaheParams {
  Dims3 tiles{8, 8, 2};     // fewer tiles along z where slices are thick
  int bins = 256;
  double clip_limit = 4.0;  // multiple of the uniform bin height
};

// Caps each bin at limit and redistributes the excess uniformly over all
// bins in a single pass; total mass is preserved (fractional counts).
std::vector<double> clip_histogram(std::vector<double> hist, double limit);

// Normalized CDF in [0,1], monotone non-decreasing, last entry 1.
// An all-zero histogram is degenerate: the flag is set and an identity
// ramp is returned.
std::vector<double> equalize_mapping(const std::vector<double>& hist,
                                     bool* degenerate = nullptr);

// Output values lie in [0,1]; geometry is unchanged. Each output voxel
// blends the mappings of the up to 8 nearest tile centers (trilinear,
// clamped at volume borders) evaluated at the voxel's intensity.
Volume3 mclahe(const Volume3& v, const ClaheParams& p = {});

// Shannon entropy (nats) of an equal-width histogram over [lo, hi];
// values outside are clamped into the end bins.
double histogram_entropy(const Volume3& v, int bins, double lo, double hi);

}  // namespace volseg
