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

#include "volseg/sliding_window.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace volseg {

namespace {

std::vector<int> axis_offsets(int dim, int window, int stride) {
  std::vector<int> out;
  for (int o = 0;; o += stride) {
    if (o + window >= dim) {
      const int last = dim - window;
      if (out.empty() || out.back() != last) out.push_back(last);
      break;
    }
    out.push_back(o);
  }
  return out;
}

Volume3 extract_patch(const Volume3& v, const Dims3& corner, const Dims3& size) {
  Volume3 patch(size, v.spacing,
                Vec3{v.origin.x + corner.x * v.spacing.x,
                     v.origin.y + corner.y * v.spacing.y,
                     v.origin.z + corner.z * v.spacing.z});
  for (int k = 0; k < size.z; ++k) {
    for (int j = 0; j < size.y; ++j) {
      const float* src = &v.voxels[v.index(corner.x, corner.y + j, corner.z + k)];
      std::copy(src, src + size.x, &patch.voxels[patch.index(0, j, k)]);
    }
  }
  return patch;
}

std::string offset_str(const Dims3& o) {
  return "(" + std::to_string(o.x) + ", " + std::to_string(o.y) + ", " +
         std::to_string(o.z) + ")";
}

void validate_patch(const Volume3& out, const Dims3& window, const Dims3& offset) {
  if (!(out.dims == window)) {
    throw PredictorContractError("predictor output dims " + std::to_string(out.dims.x) +
                                 "x" + std::to_string(out.dims.y) + "x" +
                                 std::to_string(out.dims.z) + " do not match the window at offset " +
                                 offset_str(offset));
  }
  for (float p : out.voxels) {
    if (!(p >= 0.0f && p <= 1.0f)) {
      throw PredictorContractError("predictor output outside [0,1] at offset " +
                                   offset_str(offset));
    }
  }
}

}  // namespace

std::vector<Dims3> window_offsets(const Dims3& dims, const WindowSpec& spec) {
  validate_dims(dims);
  validate_dims(spec.window);
  const Dims3 w = spec.window, s = spec.stride;
  if (s.x < 1 || s.y < 1 || s.z < 1 || s.x > w.x || s.y > w.y || s.z > w.z) {
    throw ConfigError("stride must satisfy 1 <= stride <= window per axis");
  }
  if (w.x > dims.x || w.y > dims.y || w.z > dims.z) {
    throw ConfigError("window exceeds volume dims; pad the volume first");
  }
  const std::vector<int> xs = axis_offsets(dims.x, w.x, s.x);
  const std::vector<int> ys = axis_offsets(dims.y, w.y, s.y);
  const std::vector<int> zs = axis_offsets(dims.z, w.z, s.z);
  std::vector<Dims3> out;
  out.reserve(xs.size() * ys.size() * zs.size());
  for (int x : xs) {
    for (int y : ys) {
      for (int z : zs) {
        out.push_back({x, y, z});
      }
    }
  }
  return out;
}

Volume3 predict_volume(const Volume3& v, const Predictor& pred,
                       const WindowSpec& spec, bool serial_predictor) {
  const Dims3 w = spec.window;
  const Dims3 in = v.dims;
  const bool needs_pad = in.x < w.x || in.y < w.y || in.z < w.z;

  Dims3 pd{std::max(in.x, w.x), std::max(in.y, w.y), std::max(in.z, w.z)};
  Dims3 lo{(pd.x - in.x) / 2, (pd.y - in.y) / 2, (pd.z - in.z) / 2};
  Volume3 padded;
  const Volume3* work = &v;
  if (needs_pad) {
    padded = Volume3(pd, v.spacing,
                     Vec3{v.origin.x - lo.x * v.spacing.x,
                          v.origin.y - lo.y * v.spacing.y,
                          v.origin.z - lo.z * v.spacing.z});
    for (int k = 0; k < in.z; ++k) {
      for (int j = 0; j < in.y; ++j) {
        const float* src = &v.voxels[v.index(0, j, k)];
        std::copy(src, src + in.x,
                  &padded.voxels[padded.index(lo.x, lo.y + j, lo.z + k)]);
      }
    }
    work = &padded;
  }

  const std::vector<Dims3> offsets = window_offsets(work->dims, spec);
  std::vector<double> accum(work->voxels.size(), 0.0);
  std::vector<std::uint32_t> count(work->voxels.size(), 0);

#ifdef _OPENMP
  const std::size_t batch = serial_predictor ? 1 : std::size_t(std::max(1, omp_get_max_threads()));
#else
  const std::size_t batch = 1;
#endif

  std::vector<Volume3> results(batch);
  for (std::size_t begin = 0; begin < offsets.size(); begin += batch) {
    const std::size_t end = std::min(begin + batch, offsets.size());
    // Patch predictions run concurrently; accumulation below stays in
    // window order so the mean is identical for every thread count.
#pragma omp parallel for schedule(static) if (!serial_predictor)
    for (std::int64_t idx = std::int64_t(begin); idx < std::int64_t(end); ++idx) {
      results[std::size_t(idx) - begin] = pred(extract_patch(*work, offsets[std::size_t(idx)], w));
    }
    for (std::size_t idx = begin; idx < end; ++idx) {
      const Dims3 off = offsets[idx];
      const Volume3& patch = results[idx - begin];
      validate_patch(patch, w, off);
#pragma omp parallel for schedule(static)
      for (int k = 0; k < w.z; ++k) {
        for (int j = 0; j < w.y; ++j) {
          const std::size_t dst = work->index(off.x, off.y + j, off.z + k);
          const std::size_t src = patch.index(0, j, k);
          for (int i = 0; i < w.x; ++i) {
            accum[dst + std::size_t(i)] += double(patch.voxels[src + std::size_t(i)]);
            ++count[dst + std::size_t(i)];
          }
        }
      }
    }
  }

  Volume3 out(work->dims, work->spacing, work->origin);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < std::int64_t(out.voxels.size()); ++i) {
    out.voxels[std::size_t(i)] = float(accum[std::size_t(i)] / double(count[std::size_t(i)]));
  }

  if (!needs_pad) return out;
  Volume3 cropped(in, v.spacing, v.origin);
  for (int k = 0; k < in.z; ++k) {
    for (int j = 0; j < in.y; ++j) {
      const float* src = &out.voxels[out.index(lo.x, lo.y + j, lo.z + k)];
      std::copy(src, src + in.x, &cropped.voxels[cropped.index(0, j, k)]);
    }
  }
  return cropped;
}

Mask3 predict_and_binarize(const Volume3& v, const Predictor& pred,
                           const WindowSpec& spec, double threshold,
                           bool serial_predictor) {
  return binarize(predict_volume(v, pred, spec, serial_predictor), threshold);
}

Predictor make_predictor(const std::string& name, const Volume3& input) {
  if (name.rfind("const:", 0) == 0) {
    double value = 0.0;
    try {
      value = std::stod(name.substr(6));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse predictor '" + name + "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ConfigError("const predictor value must lie in [0,1]");
    }
    return [value](const Volume3& patch) {
      Volume3 out(patch.dims, patch.spacing, patch.origin);
      std::fill(out.voxels.begin(), out.voxels.end(), float(value));
      return out;
    };
  }

  const float vmin = min_value(input);
  const float vmax = max_value(input);
  const double range = double(vmax) - double(vmin);
  auto normalize = [vmin, range](float x) {
    const double n = range == 0.0 ? double(x) : (double(x) - double(vmin)) / range;
    return float(n < 0.0 ? 0.0 : (n > 1.0 ? 1.0 : n));
  };

  if (name == "echo") {
    return [normalize](const Volume3& patch) {
      Volume3 out(patch.dims, patch.spacing, patch.origin);
      for (std::size_t i = 0; i < patch.voxels.size(); ++i) {
        out.voxels[i] = normalize(patch.voxels[i]);
      }
      return out;
    };
  }
  if (name.rfind("threshold:", 0) == 0) {
    double t = 0.0;
    try {
      t = std::stod(name.substr(10));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse predictor '" + name + "'");
    }
    return [normalize, t](const Volume3& patch) {
      Volume3 out(patch.dims, patch.spacing, patch.origin);
      for (std::size_t i = 0; i < patch.voxels.size(); ++i) {
        out.voxels[i] = double(normalize(patch.voxels[i])) >= t ? 1.0f : 0.0f;
      }
      return out;
    };
  }
  throw ConfigError("unknown predictor '" + name +
                    "' (expected const:<value>, echo, or threshold:<t>)");
}

}  // namespace volseg
