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

#include "volseg/mclahe.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace volseg {

namespace {

struct TileGrid {
  std::vector<int> start, end;  // [t], half-open voxel ranges per axis
  std::vector<double> center;   // tile centers in continuous voxel coords

  TileGrid(int n, int t) {
    start.resize(t);
    end.resize(t);
    center.resize(t);
    for (int a = 0; a < t; ++a) {
      start[a] = int(std::int64_t(a) * n / t);
      end[a] = int(std::int64_t(a + 1) * n / t);
      center[a] = 0.5 * (start[a] + end[a] - 1);
    }
  }
};

// For every voxel coordinate along one axis: the two surrounding tile
// indices and the blend weight toward the upper one. Border voxels clamp
// to the nearest tile row/plane.
struct AxisBlend {
  std::vector<int> lo, hi;
  std::vector<double> w;

  AxisBlend(int n, const TileGrid& g) {
    lo.resize(n);
    hi.resize(n);
    w.resize(n);
    const int t = int(g.center.size());
    for (int i = 0; i < n; ++i) {
      if (i <= g.center[0]) {
        lo[i] = hi[i] = 0;
        w[i] = 0.0;
      } else if (i >= g.center[t - 1]) {
        lo[i] = hi[i] = t - 1;
        w[i] = 0.0;
      } else {
        int a = 0;
        while (a + 1 < t && g.center[a + 1] <= i) ++a;
        lo[i] = a;
        hi[i] = a + 1;
        w[i] = (i - g.center[a]) / (g.center[a + 1] - g.center[a]);
      }
    }
  }
};

}  // namespace

std::vector<double> clip_histogram(std::vector<double> hist, double limit) {
  if (!(limit > 0.0)) throw ConfigError("clip limit must be > 0");
  double excess = 0.0;
  for (double& h : hist) {
    if (h > limit) {
      excess += h - limit;
      h = limit;
    }
  }
  if (excess > 0.0 && !hist.empty()) {
    const double add = excess / double(hist.size());
    for (double& h : hist) h += add;
  }
  return hist;
}

std::vector<double> equalize_mapping(const std::vector<double>& hist, bool* degenerate) {
  if (degenerate) *degenerate = false;
  std::vector<double> lut(hist.size());
  double total = 0.0;
  for (double h : hist) {
    if (h < 0.0) throw ConfigError("histogram counts must be non-negative");
    total += h;
  }
  if (total == 0.0) {
    if (degenerate) *degenerate = true;
    for (std::size_t i = 0; i < lut.size(); ++i) {
      lut[i] = double(i + 1) / double(lut.size());
    }
    return lut;
  }
  double cum = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    cum += hist[i];
    lut[i] = cum / total;
  }
  return lut;
}

Volume3 mclahe(const Volume3& v, const ClaheParams& p) {
  const Dims3 d = v.dims;
  const Dims3 t = p.tiles;
  if (t.x < 1 || t.y < 1 || t.z < 1 || p.bins < 2 || !(p.clip_limit > 0.0)) {
    throw ConfigError("invalid CLAHE parameters");
  }
  if (d.x < 2 * t.x || d.y < 2 * t.y || d.z < 2 * t.z) {
    throw ConfigError("tile grid " + std::to_string(t.x) + "x" +
                      std::to_string(t.y) + "x" + std::to_string(t.z) +
                      " leaves tiles under 2 voxels per axis for volume " +
                      std::to_string(d.x) + "x" + std::to_string(d.y) + "x" +
                      std::to_string(d.z));
  }
  validate_finite(v);

  const double gmin = min_value(v);
  const double gmax = max_value(v);
  const double range = gmax - gmin;
  const int bins = p.bins;

  auto bin_of = [gmin, range, bins](double value) {
    if (range == 0.0) return 0;
    int b = int((value - gmin) / range * double(bins));
    return b >= bins ? bins - 1 : (b < 0 ? 0 : b);
  };

  const TileGrid gx(d.x, t.x), gy(d.y, t.y), gz(d.z, t.z);
  const int n_tiles = t.x * t.y * t.z;
  std::vector<std::vector<double>> luts(static_cast<std::size_t>(n_tiles));

#pragma omp parallel for schedule(static)
  for (int ti = 0; ti < n_tiles; ++ti) {
    const int ax = ti % t.x;
    const int ay = (ti / t.x) % t.y;
    const int az = ti / (t.x * t.y);
    std::vector<double> hist(std::size_t(bins), 0.0);
    std::int64_t count = 0;
    for (int k = gz.start[az]; k < gz.end[az]; ++k) {
      for (int j = gy.start[ay]; j < gy.end[ay]; ++j) {
        for (int i = gx.start[ax]; i < gx.end[ax]; ++i) {
          hist[std::size_t(bin_of(v.at(i, j, k)))] += 1.0;
          ++count;
        }
      }
    }
    const double limit = p.clip_limit * double(count) / double(bins);
    luts[std::size_t(ti)] = equalize_mapping(clip_histogram(std::move(hist), limit));
  }

  const AxisBlend bx(d.x, gx), by(d.y, gy), bz(d.z, gz);
  auto lut_at = [&](int ax, int ay, int az) -> const std::vector<double>& {
    return luts[std::size_t(ax + t.x * (ay + t.y * az))];
  };

  Volume3 out(d, v.spacing, v.origin);
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 0; k < d.z; ++k) {
    for (int j = 0; j < d.y; ++j) {
      for (int i = 0; i < d.x; ++i) {
        const int b = bin_of(v.at(i, j, k));
        const double wx = bx.w[i], wy = by.w[j], wz = bz.w[k];
        double val = 0.0;
        for (int cz = 0; cz < 2; ++cz) {
          const int az = cz ? bz.hi[k] : bz.lo[k];
          const double fz = cz ? wz : 1.0 - wz;
          if (fz == 0.0) continue;
          for (int cy = 0; cy < 2; ++cy) {
            const int ay = cy ? by.hi[j] : by.lo[j];
            const double fy = cy ? wy : 1.0 - wy;
            if (fy == 0.0) continue;
            for (int cx = 0; cx < 2; ++cx) {
              const int ax = cx ? bx.hi[i] : bx.lo[i];
              const double fx = cx ? wx : 1.0 - wx;
              if (fx == 0.0) continue;
              val += fz * fy * fx * lut_at(ax, ay, az)[std::size_t(b)];
            }
          }
        }
        out.at(i, j, k) = float(val);
      }
    }
  }
  return out;
}

double histogram_entropy(const Volume3& v, int bins, double lo, double hi) {
  if (bins < 2 || !(hi > lo)) throw ConfigError("invalid entropy histogram");
  std::vector<double> hist(std::size_t(bins), 0.0);
  for (float x : v.voxels) {
    int b = int((double(x) - lo) / (hi - lo) * double(bins));
    b = b < 0 ? 0 : (b >= bins ? bins - 1 : b);
    hist[std::size_t(b)] += 1.0;
  }
  const double n = double(v.voxels.size());
  double h = 0.0;
  for (double c : hist) {
    if (c > 0.0) {
      const double q = c / n;
      h -= q * std::log(q);
    }
  }
  return h;
}

}  // namespace volseg
