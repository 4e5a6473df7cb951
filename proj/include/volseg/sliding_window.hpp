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

#include <functional>
#include <string>
#include <vector>

#include "volseg/volume.hpp"

namespace volseg {

struct WindowSpec {
  Dims3 window{192, 192, 32};
  Dims3 stride{48, 48, 8};  // per axis, 1 <= stride <= window
};

// Stands in for a trained network: patch image -> probability map of
// identical dims with values in [0, 1].
using Predictor = std::function<Volume3(const Volume3&)>;

// Per axis: offsets 0, s, 2s, ... with the final offset clamped to
// dims - window so the last window abuts the boundary; duplicates
// removed; lexicographic order. Every voxel is covered by >= 1 window.
std::vector<Dims3> window_offsets(const Dims3& dims, const WindowSpec& spec);

// Tiles the volume, runs the predictor per patch and mean-aggregates
// overlaps. Volumes smaller than the window are zero-padded symmetrically
// and the output cropped back. Accumulation happens in window order
// regardless of thread count, so results are reproducible. With
// serial_predictor the predictor is never invoked concurrently.
Volume3 predict_volume(const Volume3& v, const Predictor& pred,
                       const WindowSpec& spec, bool serial_predictor = false);

Mask3 predict_and_binarize(const Volume3& v, const Predictor& pred,
                           const WindowSpec& spec, double threshold = 0.5,
                           bool serial_predictor = false);

// Built-in oracle predictors, selectable by name:
//   "const:<value>"   constant probability
//   "echo"            input normalized to [0,1] over the full volume range
//   "threshold:<t>"   echo, then hard-threshold at t
// The echo normalization captures the given volume's global min/max so
// overlapping patches are consistent.
Predictor make_predictor(const std::string& name, const Volume3& input);

}  // namespace volseg
