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

#include "volseg/metrics.hpp"

#include <cmath>

namespace volseg {

namespace {

constexpr double kSoftSmooth = 1e-6;

void require_same_dims(const Dims3& a, const Dims3& b) {
  if (!(a == b)) {
    throw GeometryError("mask/volume dims mismatch");
  }
}

inline double clamp_prob(double p, double eps) {
  return p < eps ? eps : (p > 1.0 - eps ? 1.0 - eps : p);
}

void require_probabilities(const Volume3& prob) {
  for (float p : prob.voxels) {
    if (!(p >= 0.0f && p <= 1.0f)) {
      throw DataError("probability volume has values outside [0,1]");
    }
  }
}

}  // namespace

ConfusionCounts confusion(const Mask3& a, const Mask3& b) {
  require_same_dims(a.dims, b.dims);
  const std::int64_t n = std::int64_t(a.voxels.size());
  std::int64_t tp = 0, fp = 0, fn = 0;
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, fn)
  for (std::int64_t i = 0; i < n; ++i) {
    const bool ai = a.voxels[i] != 0;
    const bool bi = b.voxels[i] != 0;
    tp += ai && bi;
    fn += ai && !bi;
    fp += !ai && bi;
  }
  return {tp, fp, fn, n - tp - fp - fn};
}

double dice(const Mask3& a, const Mask3& b) {
  const ConfusionCounts c = confusion(a, b);
  const std::int64_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return 1.0;  // both empty: perfect agreement
  return 2.0 * double(c.tp) / double(denom);
}

double tversky(const Mask3& a, const Mask3& b, const TverskyParams& p) {
  if (p.alpha < 0.0 || p.beta < 0.0) {
    throw ConfigError("tversky weights must be non-negative");
  }
  const ConfusionCounts c = confusion(a, b);
  if (c.tp + c.fp + c.fn == 0) return 1.0;  // both empty
  const double denom = double(c.tp) + p.alpha * double(c.fn) + p.beta * double(c.fp);
  if (denom == 0.0) {
    throw ConfigError("tversky undefined: tp = 0 with both weights zero");
  }
  return double(c.tp) / denom;
}

double bce(const Volume3& prob, const Mask3& y, double epsilon) {
  require_same_dims(prob.dims, y.dims);
  require_probabilities(prob);
  const std::size_t n = prob.voxels.size();
  double sum = 0.0;  // serial accumulation keeps results thread-count independent
  for (std::size_t i = 0; i < n; ++i) {
    const double p = clamp_prob(prob.voxels[i], epsilon);
    sum += y.voxels[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return sum / double(n);
}

double focal_bce(const Volume3& prob, const Mask3& y, const FocalParams& fp) {
  require_same_dims(prob.dims, y.dims);
  require_probabilities(prob);
  if (fp.gamma < 0.0 || !(fp.alpha_balance > 0.0 && fp.alpha_balance <= 1.0) ||
      !(fp.epsilon > 0.0 && fp.epsilon < 0.5)) {
    throw ConfigError("invalid focal parameters");
  }
  const std::size_t n = prob.voxels.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = clamp_prob(prob.voxels[i], fp.epsilon);
    if (y.voxels[i]) {
      sum += -fp.alpha_balance * std::pow(1.0 - p, fp.gamma) * std::log(p);
    } else {
      sum += -(1.0 - fp.alpha_balance) * std::pow(p, fp.gamma) * std::log(1.0 - p);
    }
  }
  return sum / double(n);
}

namespace {

double soft_dice_loss(const Volume3& prob, const Mask3& y) {
  double sp = 0.0, sy = 0.0, spy = 0.0;
  for (std::size_t i = 0; i < prob.voxels.size(); ++i) {
    const double p = prob.voxels[i];
    const double t = y.voxels[i];
    sp += p;
    sy += t;
    spy += p * t;
  }
  return 1.0 - (2.0 * spy + kSoftSmooth) / (sp + sy + kSoftSmooth);
}

double soft_tversky_loss(const Volume3& prob, const Mask3& y, const TverskyParams& tp) {
  double spy = 0.0, sfn = 0.0, sfp = 0.0;
  for (std::size_t i = 0; i < prob.voxels.size(); ++i) {
    const double p = prob.voxels[i];
    const double t = y.voxels[i];
    spy += p * t;
    sfn += (1.0 - p) * t;
    sfp += p * (1.0 - t);
  }
  return 1.0 - (spy + kSoftSmooth) /
                   (spy + tp.alpha * sfn + tp.beta * sfp + kSoftSmooth);
}

}  // namespace

double loss(LossKind kind, const Volume3& prob, const Mask3& y,
            const TverskyParams& tp, const FocalParams& fp) {
  require_same_dims(prob.dims, y.dims);
  require_probabilities(prob);
  switch (kind) {
    case LossKind::Dice:
      return soft_dice_loss(prob, y);
    case LossKind::BFCE:
      return focal_bce(prob, y, fp);
    case LossKind::Tversky:
      return soft_tversky_loss(prob, y, tp);
    case LossKind::DicePlusBFCE:
      return soft_dice_loss(prob, y) + focal_bce(prob, y, fp);
    case LossKind::TverskyPlusBFCE:
      return soft_tversky_loss(prob, y, tp) + focal_bce(prob, y, fp);
  }
  throw ConfigError("unknown loss kind");
}

double rdsc(const Mask3& m, const ResolutionStrategy& strategy, const InterpMode& mode) {
  const Spacing3 target = strategy_target_spacing(strategy, m.spacing);
  return dice(m, reconstruct(m, target, mode));
}

}  // namespace volseg
