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

#include "volseg/mclahe.hpp"
#include "volseg/resample.hpp"
#include "volseg/rng.hpp"
#include "volseg/sliding_window.hpp"
#include "volseg/volume.hpp"

namespace volseg::reference {

// Serial reference implementations of the parallel kernels: plain loop
// nests, written independently of the production code paths. Kept for
// testing (the unit suites cross-check against them) and for the
// benchmark target that compares serial and OpenMP throughput.

Volume3 resample_onto(const Volume3& v, const Dims3& dims,
                      const Spacing3& spacing, const Vec3& origin,
                      const InterpMode& mode);
Volume3 resample_to_spacing(const Volume3& v, const Spacing3& out_spacing,
                            const InterpMode& mode);
Mask3 resample_mask_onto(const Mask3& m, const Dims3& dims,
                         const Spacing3& spacing, const Vec3& origin,
                         const InterpMode& mode);

Volume3 mclahe(const Volume3& v, const ClaheParams& p);

Volume3 predict_volume(const Volume3& v, const Predictor& pred,
                       const WindowSpec& spec);

std::pair<Volume3, Mask3> bspline_deform(const Volume3& v, const Mask3& m,
                                         const Dims3& grid, double max_disp_mm,
                                         Rng& rng);

}  // namespace volseg::reference
