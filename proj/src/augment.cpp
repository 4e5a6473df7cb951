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

#include "volseg/augment.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "volseg/resample.hpp"

namespace volseg {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_pair(const Volume3& v, const Mask3& m) {
  if (v.dims != m.dims || v.spacing != m.spacing || v.origin != m.origin) {
    throw GeometryError("image and mask must share geometry");
  }
}

// Backward warp: each output voxel samples the input at map(world).
// The identical map is applied to image (trilinear) and mask (nearest).
template <typename MapFn>
VolumeMaskPair warp_pair(const Volume3& v, const Mask3& m, MapFn&& map) {
  Volume3 ov(v.dims, v.spacing, v.origin);
  Mask3 om(m.dims, m.spacing, m.origin);
  const Dims3 d = v.dims;
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < d.z; ++k) {
    for (int j = 0; j < d.y; ++j) {
      for (int i = 0; i < d.x; ++i) {
        const Vec3 w{v.origin.x + i * v.spacing.x, v.origin.y + j * v.spacing.y,
                     v.origin.z + k * v.spacing.z};
        const Vec3 src = map(w, i, j, k);
        ov.at(i, j, k) = float(sample_trilinear(v, src));
        om.at(i, j, k) = sample_nearest(m, src);
      }
    }
  }
  return {std::move(ov), std::move(om)};
}

Vec3 grid_center_world(const Volume3& v) {
  return {v.origin.x + 0.5 * (v.dims.x - 1) * v.spacing.x,
          v.origin.y + 0.5 * (v.dims.y - 1) * v.spacing.y,
          v.origin.z + 0.5 * (v.dims.z - 1) * v.spacing.z};
}

// Uniform cubic B-spline basis for local coordinate u in [0,1]; weights
// apply to control points floor(t)-1 .. floor(t)+2 and sum to 1.
void bspline_weights(double u, double w[4]) {
  const double u2 = u * u;
  const double u3 = u2 * u;
  w[0] = (1.0 - 3.0 * u + 3.0 * u2 - u3) / 6.0;
  w[1] = (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0;
  w[2] = (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0;
  w[3] = u3 / 6.0;
}

struct AxisSpline {
  std::vector<int> base;       // floor of the control coordinate per voxel
  std::vector<double> weight;  // 4 weights per voxel

  AxisSpline(int n, int g) {
    base.resize(std::size_t(n));
    weight.resize(std::size_t(n) * 4);
    for (int i = 0; i < n; ++i) {
      const double t = n == 1 ? 0.0 : double(i) * double(g - 1) / double(n - 1);
      const int b = int(std::floor(t));
      base[std::size_t(i)] = b;
      bspline_weights(t - b, &weight[std::size_t(i) * 4]);
    }
  }
};

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

template <typename T>
Grid3<T> pad_high(const Grid3<T>& g, const Dims3& target) {
  Grid3<T> out(target, g.spacing, g.origin);
  for (int k = 0; k < g.dims.z; ++k) {
    for (int j = 0; j < g.dims.y; ++j) {
      const T* src = &g.voxels[g.index(0, j, k)];
      T* dst = &out.voxels[out.index(0, j, k)];
      std::copy(src, src + g.dims.x, dst);
    }
  }
  return out;
}

template <typename T>
Grid3<T> crop(const Grid3<T>& g, const Dims3& corner, const Dims3& size) {
  Grid3<T> out(size, g.spacing,
               Vec3{g.origin.x + corner.x * g.spacing.x,
                    g.origin.y + corner.y * g.spacing.y,
                    g.origin.z + corner.z * g.spacing.z});
  for (int k = 0; k < size.z; ++k) {
    for (int j = 0; j < size.y; ++j) {
      const T* src = &g.voxels[g.index(corner.x, corner.y + j, corner.z + k)];
      T* dst = &out.voxels[out.index(0, j, k)];
      std::copy(src, src + size.x, dst);
    }
  }
  return out;
}

}  // namespace

VolumeMaskPair flip(const Volume3& v, const Mask3& m, const std::array<bool, 3>& axes) {
  require_pair(v, m);
  if (!axes[0] && !axes[1] && !axes[2]) return {v, m};
  Volume3 ov(v.dims, v.spacing, v.origin);
  Mask3 om(m.dims, m.spacing, m.origin);
  const Dims3 d = v.dims;
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < d.z; ++k) {
    for (int j = 0; j < d.y; ++j) {
      const int sk = axes[2] ? d.z - 1 - k : k;
      const int sj = axes[1] ? d.y - 1 - j : j;
      for (int i = 0; i < d.x; ++i) {
        const int si = axes[0] ? d.x - 1 - i : i;
        ov.at(i, j, k) = v.at(si, sj, sk);
        om.at(i, j, k) = m.at(si, sj, sk);
      }
    }
  }
  return {std::move(ov), std::move(om)};
}

VolumeMaskPair rotate_z(const Volume3& v, const Mask3& m, double degrees) {
  require_pair(v, m);
  if (!(std::abs(degrees) <= 180.0)) {
    throw ConfigError("rotation must lie in [-180, 180] degrees");
  }
  if (degrees == 0.0) return {v, m};
  const Vec3 c = grid_center_world(v);
  const double rad = degrees * kPi / 180.0;
  const double cs = std::cos(rad), sn = std::sin(rad);
  // Inverse in-plane rotation about the xy-center; z is untouched.
  return warp_pair(v, m, [c, cs, sn](const Vec3& w, int, int, int) {
    const double dx = w.x - c.x, dy = w.y - c.y;
    return Vec3{c.x + cs * dx + sn * dy, c.y - sn * dx + cs * dy, w.z};
  });
}

VolumeMaskPair scale(const Volume3& v, const Mask3& m, double factor) {
  require_pair(v, m);
  if (!(factor >= 0.5 && factor <= 2.0)) {
    throw ConfigError("scale factor outside the [0.5, 2] guard range");
  }
  if (factor == 1.0) return {v, m};
  const Vec3 c = grid_center_world(v);
  const double inv = 1.0 / factor;
  return warp_pair(v, m, [c, inv](const Vec3& w, int, int, int) {
    return Vec3{c.x + (w.x - c.x) * inv, c.y + (w.y - c.y) * inv,
                c.z + (w.z - c.z) * inv};
  });
}

VolumeMaskPair bspline_deform(const Volume3& v, const Mask3& m,
                              const BsplineParams& p, Rng& rng) {
  require_pair(v, m);
  const Dims3 g = p.grid;
  if (g.x < 4 || g.y < 4 || g.z < 4) {
    throw ConfigError("B-spline control grid must be at least 4x4x4");
  }
  if (p.max_disp_mm < 0.0) throw ConfigError("max displacement must be >= 0");
  if (p.max_disp_mm == 0.0) return {v, m};

  // Control displacements in mm, drawn x-fastest, (dx, dy, dz) per point.
  const std::size_t n_ctrl = std::size_t(g.total());
  std::vector<double> disp(n_ctrl * 3);
  for (std::size_t c = 0; c < n_ctrl; ++c) {
    disp[c * 3 + 0] = rng.uniform(-p.max_disp_mm, p.max_disp_mm);
    disp[c * 3 + 1] = rng.uniform(-p.max_disp_mm, p.max_disp_mm);
    disp[c * 3 + 2] = rng.uniform(-p.max_disp_mm, p.max_disp_mm);
  }
  auto ctrl = [&](int a, int b, int c, int axis) {
    a = clampi(a, 0, g.x - 1);
    b = clampi(b, 0, g.y - 1);
    c = clampi(c, 0, g.z - 1);
    return disp[(std::size_t(a) + std::size_t(g.x) * (std::size_t(b) + std::size_t(g.y) * std::size_t(c))) * 3 +
                std::size_t(axis)];
  };

  const AxisSpline sx(v.dims.x, g.x), sy(v.dims.y, g.y), sz(v.dims.z, g.z);
  return warp_pair(v, m, [&](const Vec3& w, int i, int j, int k) {
    const double* wx = &sx.weight[std::size_t(i) * 4];
    const double* wy = &sy.weight[std::size_t(j) * 4];
    const double* wz = &sz.weight[std::size_t(k) * 4];
    const int bx = sx.base[std::size_t(i)];
    const int by = sy.base[std::size_t(j)];
    const int bz = sz.base[std::size_t(k)];
    double dx = 0.0, dy = 0.0, dz = 0.0;
    for (int cz = 0; cz < 4; ++cz) {
      for (int cy = 0; cy < 4; ++cy) {
        const double wyz = wz[cz] * wy[cy];
        for (int cx = 0; cx < 4; ++cx) {
          const double wt = wyz * wx[cx];
          const int a = bx + cx - 1, b = by + cy - 1, c = bz + cz - 1;
          dx += wt * ctrl(a, b, c, 0);
          dy += wt * ctrl(a, b, c, 1);
          dz += wt * ctrl(a, b, c, 2);
        }
      }
    }
    return Vec3{w.x + dx, w.y + dy, w.z + dz};
  });
}

VolumeMaskPair random_patch(const Volume3& v, const Mask3& m,
                            const Dims3& patch_dims, Rng& rng) {
  require_pair(v, m);
  validate_dims(patch_dims);
  Dims3 padded{std::max(v.dims.x, patch_dims.x), std::max(v.dims.y, patch_dims.y),
               std::max(v.dims.z, patch_dims.z)};
  const Volume3* pv = &v;
  const Mask3* pm = &m;
  Volume3 padded_v;
  Mask3 padded_m;
  if (!(padded == v.dims)) {
    padded_v = pad_high(v, padded);
    padded_m = pad_high(m, padded);
    pv = &padded_v;
    pm = &padded_m;
  }
  const Dims3 corner{rng.uniform_int(0, padded.x - patch_dims.x),
                     rng.uniform_int(0, padded.y - patch_dims.y),
                     rng.uniform_int(0, padded.z - patch_dims.z)};
  return {crop(*pv, corner, patch_dims), crop(*pm, corner, patch_dims)};
}

VolumeMaskPair augment_sample(const Volume3& v, const Mask3& m,
                              const AugmentConfig& cfg, Rng& rng) {
  require_pair(v, m);
  if (!(cfg.apply_prob >= 0.0 && cfg.apply_prob <= 1.0)) {
    throw ConfigError("apply probability must lie in [0,1]");
  }
  if (cfg.rot_z_deg_min > cfg.rot_z_deg_max || cfg.rot_z_deg_min < -180.0 ||
      cfg.rot_z_deg_max > 180.0) {
    throw ConfigError("rotation range must be ordered and within [-180, 180]");
  }
  if (!(cfg.scale_min >= 0.5 && cfg.scale_max <= 2.0) ||
      cfg.scale_min > cfg.scale_max) {
    throw ConfigError("scale range must be ordered and within the [0.5, 2] guard");
  }

  VolumeMaskPair cur{v, m};
  if (rng.bernoulli(cfg.apply_prob)) {
    std::array<bool, 3> axes{};
    for (int a = 0; a < 3; ++a) {
      axes[std::size_t(a)] = cfg.flip_axes_enabled[std::size_t(a)] && rng.u01() < 0.5;
    }
    cur = flip(cur.first, cur.second, axes);
  }
  if (rng.bernoulli(cfg.apply_prob)) {
    cur = rotate_z(cur.first, cur.second,
                   rng.uniform(cfg.rot_z_deg_min, cfg.rot_z_deg_max));
  }
  if (rng.bernoulli(cfg.apply_prob)) {
    cur = scale(cur.first, cur.second, rng.uniform(cfg.scale_min, cfg.scale_max));
  }
  if (rng.bernoulli(cfg.apply_prob)) {
    cur = bspline_deform(cur.first, cur.second, cfg.bspline, rng);
  }
  return random_patch(cur.first, cur.second, cfg.patch_dims, rng);
}

}  // namespace volseg
