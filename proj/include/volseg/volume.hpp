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

#include <cstdint>
#include <vector>

#include "volseg/error.hpp"

namespace volseg {

struct Dims3 {
  int x = 0, y = 0, z = 0;
  std::int64_t total() const {
    return std::int64_t(x) * std::int64_t(y) * std::int64_t(z);
  }
  bool operator==(const Dims3&) const = default;
};

// Physical voxel size in millimeters, strictly positive and finite.
struct Spacing3 {
  double x = 1.0, y = 1.0, z = 1.0;
  bool operator==(const Spacing3&) const = default;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
  bool operator==(const Vec3&) const = default;
};

void validate_dims(const Dims3& d);
void validate_spacing(const Spacing3& s);

// Dense 3D grid with x-fastest (first index contiguous) memory order,
// matching the MetaImage raw layout. Geometry follows the voxel-center
// convention: index (i,j,k) sits at origin + (i*sx, j*sy, k*sz).
// Grids are treated as immutable once filled; all read paths are
// safe to call concurrently.
template <typename T>
struct Grid3 {
  Dims3 dims;
  Spacing3 spacing;
  Vec3 origin;
  std::vector<T> voxels;

  Grid3() = default;
  Grid3(Dims3 d, Spacing3 s, Vec3 o = {})
      : dims(d), spacing(s), origin(o) {
    validate_dims(d);
    validate_spacing(s);
    voxels.assign(static_cast<std::size_t>(d.total()), T{});
  }

  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) +
           std::size_t(dims.x) * (std::size_t(j) + std::size_t(dims.y) * std::size_t(k));
  }
  T& at(int i, int j, int k) { return voxels[index(i, j, k)]; }
  const T& at(int i, int j, int k) const { return voxels[index(i, j, k)]; }

  bool in_bounds(int i, int j, int k) const {
    return i >= 0 && i < dims.x && j >= 0 && j < dims.y && k >= 0 && k < dims.z;
  }
  bool same_geometry(const Grid3& other) const {
    return dims == other.dims && spacing == other.spacing && origin == other.origin;
  }
};

using Volume3 = Grid3<float>;
using Mask3 = Grid3<std::uint8_t>;

template <typename T>
Vec3 voxel_to_world(const Grid3<T>& g, int i, int j, int k) {
  if (!g.in_bounds(i, j, k)) {
    throw GeometryError("voxel index out of range");
  }
  return {g.origin.x + i * g.spacing.x,
          g.origin.y + j * g.spacing.y,
          g.origin.z + k * g.spacing.z};
}

// Continuous voxel coordinates; out-of-grid points are permitted, the
// interpolators decide what to do with them.
template <typename T>
Vec3 world_to_voxel(const Grid3<T>& g, const Vec3& p) {
  return {(p.x - g.origin.x) / g.spacing.x,
          (p.y - g.origin.y) / g.spacing.y,
          (p.z - g.origin.z) / g.spacing.z};
}

// voxel >= threshold maps to 1, else 0; geometry preserved.
Mask3 binarize(const Volume3& v, double threshold);

// Throws DataError if any voxel is NaN or infinite.
void validate_finite(const Volume3& v);

float min_value(const Volume3& v);
float max_value(const Volume3& v);

}  // namespace volseg
