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

#include "volseg/resample.hpp"
#include "volseg/volume.hpp"

namespace volseg {

// a is treated as ground truth, b as prediction.
struct ConfusionCounts {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct TverskyParams {
  double alpha = 0.5;  // false-negative weight
  double beta = 0.5;   // false-positive weight
};

struct FocalParams {
  double gamma = 2.0;          // focusing exponent
  double alpha_balance = 0.25;  // foreground class weight, in (0, 1]
  double epsilon = 1e-7;        // probability clamp
};

enum class LossKind { Dice, BFCE, Tversky, DicePlusBFCE, TverskyPlusBFCE };

ConfusionCounts confusion(const Mask3& a, const Mask3& b);

// 2*tp / (2*tp + fp + fn). Both masks empty scores 1.0 (perfect agreement).
double dice(const Mask3& a, const Mask3& b);

// tp / (tp + alpha*fn + beta*fp). Both masks empty scores 1.0.
double tversky(const Mask3& a, const Mask3& b, const TverskyParams& p);

// Mean binary cross-entropy, probabilities clamped to [eps, 1-eps].
double bce(const Volume3& prob, const Mask3& y, double epsilon = 1e-7);

// Focal variant; gamma = 0 with alpha_balance = 0.5 reduces to 0.5 * bce.
double focal_bce(const Volume3& prob, const Mask3& y, const FocalParams& p);

// Loss evaluation on probability maps. Dice/Tversky terms use the soft
// formulation (sums of products replace set cardinalities) with a 1e-6
// smoothing constant; combined losses are unweighted 1:1 sums.
double loss(LossKind kind, const Volume3& prob, const Mask3& y,
            const TverskyParams& tp = {}, const FocalParams& fp = {});

// Reconstruction Dice: overlap between a mask and itself after a round
// trip through the strategy's target spacing.
double rdsc(const Mask3& m, const ResolutionStrategy& strategy,
            const InterpMode& mode);

}  // namespace volseg
