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

// Plain serial implementations of the parallel kernels. These are written
// as straightforward loop nests, separate from the production code, and
// exist so that tests can cross-check the OpenMP paths and the benchmark
// can measure the speedup against them.

#include "volseg/reference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace volseg::reference {

namespace {

double snap(double f) {
  const double rounded = std::nearbyint(f * 2.0) / 2.0;
  if (std::fabs(f - rounded) < 1e-9) return rounded;
  return f;
}

template <typename T>
double interp_trilinear(const Grid3<T>& g, double wx, double wy, double wz) {
  double f[3] = {snap((wx - g.origin.x) / g.spacing.x),
                 snap((wy - g.origin.y) / g.spacing.y),
                 snap((wz - g.origin.z) / g.spacing.z)};
  const int n[3] = {g.dims.x, g.dims.y, g.dims.z};
  for (int a = 0; a < 3; ++a) {
    if (f[a] < -0.5 || f[a] > n[a] - 0.5) return 0.0;
  }
  int base[3];
  double frac[3];
  for (int a = 0; a < 3; ++a) {
    base[a] = int(std::floor(f[a]));
    frac[a] = f[a] - base[a];
  }
  double value = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    int idx[3];
    double weight = 1.0;
    for (int a = 0; a < 3; ++a) {
      const int bit = (corner >> a) & 1;
      idx[a] = base[a] + bit;
      if (idx[a] < 0) idx[a] = 0;
      if (idx[a] > n[a] - 1) idx[a] = n[a] - 1;
      weight *= bit ? frac[a] : 1.0 - frac[a];
    }
    value += weight * double(g.at(idx[0], idx[1], idx[2]));
  }
  return value;
}

template <typename T>
T interp_nearest(const Grid3<T>& g, double wx, double wy, double wz) {
  double f[3] = {snap((wx - g.origin.x) / g.spacing.x),
                 snap((wy - g.origin.y) / g.spacing.y),
                 snap((wz - g.origin.z) / g.spacing.z)};
  const int n[3] = {g.dims.x, g.dims.y, g.dims.z};
  int idx[3];
  for (int a = 0; a < 3; ++a) {
    if (f[a] < -0.5 || f[a] > n[a] - 0.5) return T{};
    int i = int(std::ceil(f[a] - 0.5));
    if (i < 0) i = 0;
    if (i > n[a] - 1) i = n[a] - 1;
    idx[a] = i;
  }
  return g.at(idx[0], idx[1], idx[2]);
}

}  // namespace

Volume3 resample_onto(const Volume3& v, const Dims3& dims, const Spacing3& spacing,
                      const Vec3& origin, const InterpMode& mode) {
  Volume3 out(dims, spacing, origin);
  for (int k = 0; k < dims.z; ++k) {
    for (int j = 0; j < dims.y; ++j) {
      for (int i = 0; i < dims.x; ++i) {
        const double wx = origin.x + i * spacing.x;
        const double wy = origin.y + j * spacing.y;
        const double wz = origin.z + k * spacing.z;
        double value;
        if (mode.kind == InterpKind::NearestNeighbor) {
          value = interp_nearest(v, wx, wy, wz);
        } else {
          value = interp_trilinear(v, wx, wy, wz);
          if (mode.kind == InterpKind::TrilinearThenThreshold) {
            value = value >= mode.threshold ? 1.0 : 0.0;
          }
        }
        out.at(i, j, k) = float(value);
      }
    }
  }
  return out;
}

Volume3 resample_to_spacing(const Volume3& v, const Spacing3& out_spacing,
                            const InterpMode& mode) {
  return reference::resample_onto(v, output_dims(v.dims, v.spacing, out_spacing),
                                  out_spacing, v.origin, mode);
}

Mask3 resample_mask_onto(const Mask3& m, const Dims3& dims, const Spacing3& spacing,
                         const Vec3& origin, const InterpMode& mode) {
  if (mode.kind == InterpKind::Trilinear) {
    throw ConfigError("mask resampling requires a binary-preserving mode");
  }
  Mask3 out(dims, spacing, origin);
  for (int k = 0; k < dims.z; ++k) {
    for (int j = 0; j < dims.y; ++j) {
      for (int i = 0; i < dims.x; ++i) {
        const double wx = origin.x + i * spacing.x;
        const double wy = origin.y + j * spacing.y;
        const double wz = origin.z + k * spacing.z;
        if (mode.kind == InterpKind::NearestNeighbor) {
          out.at(i, j, k) = interp_nearest(m, wx, wy, wz);
        } else {
          out.at(i, j, k) = interp_trilinear(m, wx, wy, wz) >= mode.threshold ? 1 : 0;
        }
      }
    }
  }
  return out;
}

Volume3 mclahe(const Volume3& v, const ClaheParams& p) {
  const Dims3 d = v.dims;
  const Dims3 t = p.tiles;
  if (t.x < 1 || t.y < 1 || t.z < 1 || p.bins < 2 || !(p.clip_limit > 0.0) ||
      d.x < 2 * t.x || d.y < 2 * t.y || d.z < 2 * t.z) {
    throw ConfigError("invalid CLAHE parameters for this volume");
  }

  float gmin = v.voxels[0], gmax = v.voxels[0];
  for (float x : v.voxels) {
    gmin = std::min(gmin, x);
    gmax = std::max(gmax, x);
  }
  const double range = double(gmax) - double(gmin);
  const int bins = p.bins;
  auto bin_of = [&](double value) {
    if (range == 0.0) return 0;
    int b = int((value - double(gmin)) / range * bins);
    return std::clamp(b, 0, bins - 1);
  };

  std::vector<int> sx(std::size_t(t.x) + 1), sy(std::size_t(t.y) + 1), sz(std::size_t(t.z) + 1);
  for (int a = 0; a <= t.x; ++a) sx[std::size_t(a)] = int(std::int64_t(a) * d.x / t.x);
  for (int a = 0; a <= t.y; ++a) sy[std::size_t(a)] = int(std::int64_t(a) * d.y / t.y);
  for (int a = 0; a <= t.z; ++a) sz[std::size_t(a)] = int(std::int64_t(a) * d.z / t.z);

  std::vector<std::vector<double>> luts;
  for (int az = 0; az < t.z; ++az) {
    for (int ay = 0; ay < t.y; ++ay) {
      for (int ax = 0; ax < t.x; ++ax) {
        std::vector<double> hist(std::size_t(bins), 0.0);
        long count = 0;
        for (int k = sz[std::size_t(az)]; k < sz[std::size_t(az) + 1]; ++k) {
          for (int j = sy[std::size_t(ay)]; j < sy[std::size_t(ay) + 1]; ++j) {
            for (int i = sx[std::size_t(ax)]; i < sx[std::size_t(ax) + 1]; ++i) {
              hist[std::size_t(bin_of(v.at(i, j, k)))] += 1.0;
              ++count;
            }
          }
        }
        const double limit = p.clip_limit * double(count) / double(bins);
        double excess = 0.0;
        for (double& h : hist) {
          if (h > limit) {
            excess += h - limit;
            h = limit;
          }
        }
        for (double& h : hist) h += excess / double(bins);
        double total = 0.0;
        for (double h : hist) total += h;
        std::vector<double> lut(static_cast<std::size_t>(bins));
        double cum = 0.0;
        for (int b = 0; b < bins; ++b) {
          cum += hist[std::size_t(b)];
          lut[std::size_t(b)] = cum / total;
        }
        luts.push_back(std::move(lut));
      }
    }
  }

  auto centers = [](const std::vector<int>& bounds) {
    std::vector<double> c;
    for (std::size_t a = 0; a + 1 < bounds.size(); ++a) {
      c.push_back(0.5 * (bounds[a] + bounds[a + 1] - 1));
    }
    return c;
  };
  const std::vector<double> cx = centers(sx), cy = centers(sy), cz = centers(sz);

  auto locate = [](const std::vector<double>& c, int i, int& lo, int& hi, double& w) {
    const int t_count = int(c.size());
    if (i <= c[0]) {
      lo = hi = 0;
      w = 0.0;
    } else if (i >= c[std::size_t(t_count) - 1]) {
      lo = hi = t_count - 1;
      w = 0.0;
    } else {
      int a = 0;
      while (a + 1 < t_count && c[std::size_t(a) + 1] <= i) ++a;
      lo = a;
      hi = a + 1;
      w = (i - c[std::size_t(a)]) / (c[std::size_t(a) + 1] - c[std::size_t(a)]);
    }
  };

  Volume3 out(d, v.spacing, v.origin);
  for (int k = 0; k < d.z; ++k) {
    int zlo, zhi;
    double wz;
    locate(cz, k, zlo, zhi, wz);
    for (int j = 0; j < d.y; ++j) {
      int ylo, yhi;
      double wy;
      locate(cy, j, ylo, yhi, wy);
      for (int i = 0; i < d.x; ++i) {
        int xlo, xhi;
        double wx;
        locate(cx, i, xlo, xhi, wx);
        const int b = bin_of(v.at(i, j, k));
        auto lut_of = [&](int ax, int ay, int az) {
          return luts[std::size_t(ax) + std::size_t(t.x) * (std::size_t(ay) + std::size_t(t.y) * std::size_t(az))][std::size_t(b)];
        };
        const double v00 = lut_of(xlo, ylo, zlo) * (1 - wx) + lut_of(xhi, ylo, zlo) * wx;
        const double v10 = lut_of(xlo, yhi, zlo) * (1 - wx) + lut_of(xhi, yhi, zlo) * wx;
        const double v01 = lut_of(xlo, ylo, zhi) * (1 - wx) + lut_of(xhi, ylo, zhi) * wx;
        const double v11 = lut_of(xlo, yhi, zhi) * (1 - wx) + lut_of(xhi, yhi, zhi) * wx;
        const double v0 = v00 * (1 - wy) + v10 * wy;
        const double v1 = v01 * (1 - wy) + v11 * wy;
        out.at(i, j, k) = float(v0 * (1 - wz) + v1 * wz);
      }
    }
  }
  return out;
}

Volume3 predict_volume(const Volume3& v, const Predictor& pred, const WindowSpec& spec) {
  const Dims3 w = spec.window;
  const Dims3 in = v.dims;
  const Dims3 pd{std::max(in.x, w.x), std::max(in.y, w.y), std::max(in.z, w.z)};
  const Dims3 lo{(pd.x - in.x) / 2, (pd.y - in.y) / 2, (pd.z - in.z) / 2};

  Volume3 work(pd, v.spacing,
               Vec3{v.origin.x - lo.x * v.spacing.x, v.origin.y - lo.y * v.spacing.y,
                    v.origin.z - lo.z * v.spacing.z});
  for (int k = 0; k < in.z; ++k) {
    for (int j = 0; j < in.y; ++j) {
      for (int i = 0; i < in.x; ++i) {
        work.at(lo.x + i, lo.y + j, lo.z + k) = v.at(i, j, k);
      }
    }
  }

  std::vector<double> accum(work.voxels.size(), 0.0);
  std::vector<int> count(work.voxels.size(), 0);
  for (const Dims3& off : window_offsets(pd, spec)) {
    Volume3 patch(w, work.spacing,
                  Vec3{work.origin.x + off.x * work.spacing.x,
                       work.origin.y + off.y * work.spacing.y,
                       work.origin.z + off.z * work.spacing.z});
    for (int k = 0; k < w.z; ++k) {
      for (int j = 0; j < w.y; ++j) {
        for (int i = 0; i < w.x; ++i) {
          patch.at(i, j, k) = work.at(off.x + i, off.y + j, off.z + k);
        }
      }
    }
    const Volume3 out = pred(patch);
    if (!(out.dims == w)) throw PredictorContractError("predictor output dims mismatch");
    for (int k = 0; k < w.z; ++k) {
      for (int j = 0; j < w.y; ++j) {
        for (int i = 0; i < w.x; ++i) {
          const float p = out.at(i, j, k);
          if (!(p >= 0.0f && p <= 1.0f)) {
            throw PredictorContractError("predictor output outside [0,1]");
          }
          accum[work.index(off.x + i, off.y + j, off.z + k)] += double(p);
          count[work.index(off.x + i, off.y + j, off.z + k)] += 1;
        }
      }
    }
  }

  Volume3 result(in, v.spacing, v.origin);
  for (int k = 0; k < in.z; ++k) {
    for (int j = 0; j < in.y; ++j) {
      for (int i = 0; i < in.x; ++i) {
        const std::size_t idx = work.index(lo.x + i, lo.y + j, lo.z + k);
        result.at(i, j, k) = float(accum[idx] / double(count[idx]));
      }
    }
  }
  return result;
}

std::pair<Volume3, Mask3> bspline_deform(const Volume3& v, const Mask3& m,
                                         const Dims3& grid, double max_disp_mm,
                                         Rng& rng) {
  if (grid.x < 4 || grid.y < 4 || grid.z < 4) {
    throw ConfigError("B-spline control grid must be at least 4x4x4");
  }
  if (max_disp_mm == 0.0) return {v, m};

  const std::size_t n_ctrl = std::size_t(grid.total());
  std::vector<double> disp(n_ctrl * 3);
  for (std::size_t c = 0; c < n_ctrl; ++c) {
    for (int a = 0; a < 3; ++a) {
      disp[c * 3 + std::size_t(a)] = rng.uniform(-max_disp_mm, max_disp_mm);
    }
  }
  auto ctrl = [&](int a, int b, int c, int axis) {
    a = std::clamp(a, 0, grid.x - 1);
    b = std::clamp(b, 0, grid.y - 1);
    c = std::clamp(c, 0, grid.z - 1);
    return disp[(std::size_t(a) + std::size_t(grid.x) * (std::size_t(b) + std::size_t(grid.y) * std::size_t(c))) * 3 + std::size_t(axis)];
  };
  auto basis = [](double u, int which) {
    switch (which) {
      case 0: return (1 - u) * (1 - u) * (1 - u) / 6.0;
      case 1: return (3 * u * u * u - 6 * u * u + 4) / 6.0;
      case 2: return (-3 * u * u * u + 3 * u * u + 3 * u + 1) / 6.0;
      default: return u * u * u / 6.0;
    }
  };

  Volume3 ov(v.dims, v.spacing, v.origin);
  Mask3 om(m.dims, m.spacing, m.origin);
  for (int k = 0; k < v.dims.z; ++k) {
    for (int j = 0; j < v.dims.y; ++j) {
      for (int i = 0; i < v.dims.x; ++i) {
        const double tx = v.dims.x == 1 ? 0.0 : double(i) * (grid.x - 1) / double(v.dims.x - 1);
        const double ty = v.dims.y == 1 ? 0.0 : double(j) * (grid.y - 1) / double(v.dims.y - 1);
        const double tz = v.dims.z == 1 ? 0.0 : double(k) * (grid.z - 1) / double(v.dims.z - 1);
        const int bx = int(std::floor(tx)), by = int(std::floor(ty)), bz = int(std::floor(tz));
        double d3[3] = {0, 0, 0};
        for (int cz = 0; cz < 4; ++cz) {
          for (int cy = 0; cy < 4; ++cy) {
            for (int cx2 = 0; cx2 < 4; ++cx2) {
              const double wgt = basis(tz - bz, cz) * basis(ty - by, cy) * basis(tx - bx, cx2);
              for (int a = 0; a < 3; ++a) {
                d3[a] += wgt * ctrl(bx + cx2 - 1, by + cy - 1, bz + cz - 1, a);
              }
            }
          }
        }
        const double wx = v.origin.x + i * v.spacing.x + d3[0];
        const double wy = v.origin.y + j * v.spacing.y + d3[1];
        const double wz = v.origin.z + k * v.spacing.z + d3[2];
        ov.at(i, j, k) = float(interp_trilinear(v, wx, wy, wz));
        om.at(i, j, k) = interp_nearest(m, wx, wy, wz);
      }
    }
  }
  return {std::move(ov), std::move(om)};
}

}  // namespace volseg::reference
