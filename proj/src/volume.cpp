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

#include "volseg/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace volseg {

void validate_dims(const Dims3& d) {
  if (d.x <= 0 || d.y <= 0 || d.z <= 0) {
    throw GeometryError("volume dims must be positive, got " +
                        std::to_string(d.x) + "x" + std::to_string(d.y) + "x" +
                        std::to_string(d.z));
  }
}

void validate_spacing(const Spacing3& s) {
  const bool ok = s.x > 0.0 && s.y > 0.0 && s.z > 0.0 &&
                  std::isfinite(s.x) && std::isfinite(s.y) && std::isfinite(s.z);
  if (!ok) {
    throw GeometryError("spacing components must be finite and > 0");
  }
}

Mask3 binarize(const Volume3& v, double threshold) {
  Mask3 m(v.dims, v.spacing, v.origin);
  const std::size_t n = v.voxels.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) {
    m.voxels[i] = double(v.voxels[i]) >= threshold ? 1 : 0;
  }
  return m;
}

void validate_finite(const Volume3& v) {
  for (std::size_t i = 0; i < v.voxels.size(); ++i) {
    if (!std::isfinite(v.voxels[i])) {
      throw DataError("non-finite voxel value at linear index " +
                      std::to_string(i));
    }
  }
}

float min_value(const Volume3& v) {
  return *std::min_element(v.voxels.begin(), v.voxels.end());
}

float max_value(const Volume3& v) {
  return *std::max_element(v.voxels.begin(), v.voxels.end());
}

}  // namespace volseg
