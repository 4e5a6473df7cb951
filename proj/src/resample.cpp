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

#include "volseg/resample.hpp"

#include <cmath>
#include <cstdio>

namespace volseg {

namespace {

// Snap a continuous voxel coordinate to the nearest multiple of 0.5 when
// within 1e-9. Voxel centers and half-voxel ties then evaluate exactly,
// which keeps identity resamples and superset-grid round trips lossless.
inline double snap_half(double f) {
  const double r = std::nearbyint(f * 2.0) * 0.5;
  return std::abs(f - r) < 1e-9 ? r : f;
}

inline int clampi(int v, int lo, int hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

template <typename T>
inline double tri_sample(const Grid3<T>& g, const Vec3& w) {
  const double fx = snap_half((w.x - g.origin.x) / g.spacing.x);
  const double fy = snap_half((w.y - g.origin.y) / g.spacing.y);
  const double fz = snap_half((w.z - g.origin.z) / g.spacing.z);
  // Background beyond half a voxel outside the grid.
  if (fx < -0.5 || fx > g.dims.x - 0.5 || fy < -0.5 || fy > g.dims.y - 0.5 ||
      fz < -0.5 || fz > g.dims.z - 0.5) {
    return 0.0;
  }
  const int ix = int(std::floor(fx));
  const int iy = int(std::floor(fy));
  const int iz = int(std::floor(fz));
  const double tx = fx - ix, ty = fy - iy, tz = fz - iz;
  const int x0 = clampi(ix, 0, g.dims.x - 1), x1 = clampi(ix + 1, 0, g.dims.x - 1);
  const int y0 = clampi(iy, 0, g.dims.y - 1), y1 = clampi(iy + 1, 0, g.dims.y - 1);
  const int z0 = clampi(iz, 0, g.dims.z - 1), z1 = clampi(iz + 1, 0, g.dims.z - 1);

  const double c000 = g.at(x0, y0, z0), c100 = g.at(x1, y0, z0);
  const double c010 = g.at(x0, y1, z0), c110 = g.at(x1, y1, z0);
  const double c001 = g.at(x0, y0, z1), c101 = g.at(x1, y0, z1);
  const double c011 = g.at(x0, y1, z1), c111 = g.at(x1, y1, z1);

  const double c00 = c000 * (1.0 - tx) + c100 * tx;
  const double c10 = c010 * (1.0 - tx) + c110 * tx;
  const double c01 = c001 * (1.0 - tx) + c101 * tx;
  const double c11 = c011 * (1.0 - tx) + c111 * tx;
  const double c0 = c00 * (1.0 - ty) + c10 * ty;
  const double c1 = c01 * (1.0 - ty) + c11 * ty;
  return c0 * (1.0 - tz) + c1 * tz;
}

template <typename T>
inline T nn_sample(const Grid3<T>& g, const Vec3& w) {
  const double fx = snap_half((w.x - g.origin.x) / g.spacing.x);
  const double fy = snap_half((w.y - g.origin.y) / g.spacing.y);
  const double fz = snap_half((w.z - g.origin.z) / g.spacing.z);
  if (fx < -0.5 || fx > g.dims.x - 0.5 || fy < -0.5 || fy > g.dims.y - 0.5 ||
      fz < -0.5 || fz > g.dims.z - 0.5) {
    return T{};
  }
  // ceil(f - 0.5) rounds half-integer ties toward the lower index.
  const int i = clampi(int(std::ceil(fx - 0.5)), 0, g.dims.x - 1);
  const int j = clampi(int(std::ceil(fy - 0.5)), 0, g.dims.y - 1);
  const int k = clampi(int(std::ceil(fz - 0.5)), 0, g.dims.z - 1);
  return g.at(i, j, k);
}

template <typename Out, typename In, typename Fn>
Grid3<Out> map_grid(const Grid3<In>& in, const Dims3& dims, const Spacing3& spacing,
                    const Vec3& origin, Fn&& fn) {
  Grid3<Out> out(dims, spacing, origin);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < dims.z; ++k) {
    for (int j = 0; j < dims.y; ++j) {
      const double wy = origin.y + j * spacing.y;
      const double wz = origin.z + k * spacing.z;
      Out* row = &out.voxels[out.index(0, j, k)];
      for (int i = 0; i < dims.x; ++i) {
        row[i] = fn(in, Vec3{origin.x + i * spacing.x, wy, wz});
      }
    }
  }
  return out;
}

}  // namespace

InterpMode InterpMode::trilinear_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw ConfigError("mask threshold must lie in (0,1)");
  }
  return {InterpKind::TrilinearThenThreshold, t};
}

std::string InterpMode::label() const {
  switch (kind) {
    case InterpKind::NearestNeighbor: return "nearest";
    case InterpKind::Trilinear: return "trilinear";
    case InterpKind::TrilinearThenThreshold: {
      char tmp[48];
      std::snprintf(tmp, sizeof(tmp), "trilinear_threshold(%.10g)", threshold);
      return tmp;
    }
  }
  return "trilinear";
}

ResolutionStrategy ResolutionStrategy::fixed(const Spacing3& s) {
  validate_spacing(s);
  return {StrategyKind::FixedSpacing, s};
}

std::string ResolutionStrategy::label() const {
  switch (kind) {
    case StrategyKind::HalfResolution: return "half_resolution";
    case StrategyKind::TwiceResolution: return "twice_resolution";
    case StrategyKind::FixedSpacing: {
      char tmp[96];
      std::snprintf(tmp, sizeof(tmp), "fixed_%.10gx%.10gx%.10g", spacing.x,
                    spacing.y, spacing.z);
      return tmp;
    }
  }
  return "fixed";
}

Spacing3 strategy_target_spacing(const ResolutionStrategy& strategy,
                                 const Spacing3& case_spacing) {
  validate_spacing(case_spacing);
  switch (strategy.kind) {
    case StrategyKind::HalfResolution:
      return {case_spacing.x * 2.0, case_spacing.y * 2.0, case_spacing.z * 2.0};
    case StrategyKind::TwiceResolution:
      return {case_spacing.x / 2.0, case_spacing.y / 2.0, case_spacing.z / 2.0};
    case StrategyKind::FixedSpacing:
      return strategy.spacing;
  }
  return case_spacing;
}

Dims3 output_dims(const Dims3& in_dims, const Spacing3& in_spacing,
                  const Spacing3& out_spacing) {
  validate_dims(in_dims);
  validate_spacing(in_spacing);
  validate_spacing(out_spacing);
  auto axis = [](int n, double s_in, double s_out) {
    const int n_out = int(std::ceil(double(n) * s_in / s_out));
    return n_out < 1 ? 1 : n_out;
  };
  return {axis(in_dims.x, in_spacing.x, out_spacing.x),
          axis(in_dims.y, in_spacing.y, out_spacing.y),
          axis(in_dims.z, in_spacing.z, out_spacing.z)};
}

double sample_trilinear(const Volume3& v, const Vec3& world) { return tri_sample(v, world); }
double sample_trilinear(const Mask3& m, const Vec3& world) { return tri_sample(m, world); }
float sample_nearest(const Volume3& v, const Vec3& world) { return nn_sample(v, world); }
std::uint8_t sample_nearest(const Mask3& m, const Vec3& world) { return nn_sample(m, world); }

double sample(const Volume3& v, const Vec3& world, const InterpMode& mode) {
  switch (mode.kind) {
    case InterpKind::NearestNeighbor: return nn_sample(v, world);
    case InterpKind::Trilinear: return tri_sample(v, world);
    case InterpKind::TrilinearThenThreshold:
      return tri_sample(v, world) >= mode.threshold ? 1.0 : 0.0;
  }
  return 0.0;
}

Volume3 resample_onto(const Volume3& v, const Dims3& dims, const Spacing3& spacing,
                      const Vec3& origin, const InterpMode& mode) {
  switch (mode.kind) {
    case InterpKind::NearestNeighbor:
      return map_grid<float>(v, dims, spacing, origin,
                             [](const Volume3& g, const Vec3& w) { return nn_sample(g, w); });
    case InterpKind::Trilinear:
      return map_grid<float>(v, dims, spacing, origin, [](const Volume3& g, const Vec3& w) {
        return float(tri_sample(g, w));
      });
    case InterpKind::TrilinearThenThreshold: {
      const double thr = mode.threshold;
      return map_grid<float>(v, dims, spacing, origin, [thr](const Volume3& g, const Vec3& w) {
        return tri_sample(g, w) >= thr ? 1.0f : 0.0f;
      });
    }
  }
  throw ConfigError("unknown interpolation mode");
}

Volume3 resample_to_spacing(const Volume3& v, const Spacing3& out_spacing,
                            const InterpMode& mode) {
  return resample_onto(v, output_dims(v.dims, v.spacing, out_spacing), out_spacing,
                       v.origin, mode);
}

Mask3 resample_mask_onto(const Mask3& m, const Dims3& dims, const Spacing3& spacing,
                         const Vec3& origin, const InterpMode& mode) {
  switch (mode.kind) {
    case InterpKind::NearestNeighbor:
      return map_grid<std::uint8_t>(m, dims, spacing, origin,
                                    [](const Mask3& g, const Vec3& w) { return nn_sample(g, w); });
    case InterpKind::TrilinearThenThreshold: {
      const double thr = mode.threshold;
      return map_grid<std::uint8_t>(m, dims, spacing, origin,
                                    [thr](const Mask3& g, const Vec3& w) {
                                      return std::uint8_t(tri_sample(g, w) >= thr ? 1 : 0);
                                    });
    }
    case InterpKind::Trilinear:
      break;
  }
  throw ConfigError(
      "mask resampling requires NearestNeighbor or TrilinearThenThreshold "
      "(plain trilinear would break binarity)");
}

Mask3 resample_mask(const Mask3& m, const Spacing3& out_spacing, const InterpMode& mode) {
  return resample_mask_onto(m, output_dims(m.dims, m.spacing, out_spacing), out_spacing,
                            m.origin, mode);
}

Mask3 reconstruct(const Mask3& m, const Spacing3& target_spacing, const InterpMode& mode) {
  const Mask3 intermediate = resample_mask(m, target_spacing, mode);
  return resample_mask_onto(intermediate, m.dims, m.spacing, m.origin, mode);
}

}  // namespace volseg
