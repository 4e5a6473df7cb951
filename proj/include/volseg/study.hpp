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

#include <string>
#include <utility>
#include <vector>

#include "volseg/metrics.hpp"
#include "volseg/resample.hpp"
#include "volseg/stats.hpp"

namespace volseg {

// Resolution study over a directory of MetaImage segmentations: per-case
// rDSC for every strategy, aggregates, and all pairwise paired t-tests.

struct StudyConfig {
  std::string dataset_dir;
  std::vector<ResolutionStrategy> strategies;  // >= 2 for pairwise testing
  InterpMode mask_mode = InterpMode::trilinear_threshold(0.5);
  int workers = 0;  // 0 keeps the ambient thread count
};

// The five strategies of the resolution study, in study order: half and
// twice the per-case resolution, the training-set median spacing, the
// community-standard spacing, and the proposed spacing.
std::vector<ResolutionStrategy> default_study_strategies();

struct PairwiseCell {
  double t = 0.0;
  double p = 1.0;
  int df = 0;
  bool degenerate = false;
};

struct StudyReport {
  std::vector<std::string> strategy_labels;
  std::vector<std::string> case_ids;
  std::vector<std::vector<double>> values;  // [case][strategy], rDSC in [0,1]
  std::vector<double> mean;                 // per strategy
  std::vector<double> sd;
  std::vector<double> median;
  std::vector<std::vector<PairwiseCell>> pairwise;  // antisymmetric in t
  std::vector<std::pair<std::string, std::string>> excluded;  // case, reason
  // Provenance: rDSC values are meaningless without the conventions.
  std::string mask_mode_desc;
  std::string conventions;
  std::string version;

  bool operator==(const StudyReport&) const;
};

bool operator==(const PairwiseCell& a, const PairwiseCell& b);

StudyReport run_study(const StudyConfig& cfg);

// CSV: header plus one row per case, one column per strategy, 6 decimals.
void emit_report_csv(const StudyReport& r, const std::string& path);

// JSON round trips: read_report_json(emit_report_json(r)) == r.
void emit_report_json(const StudyReport& r, const std::string& path);
StudyReport read_report_json(const std::string& path);

// Self-contained box plot (median, quartiles, whiskers at 1.5*IQR,
// outlier dots) per strategy, rDSC scale [0,1]. Quartiles use linear
// interpolation between order statistics.
void emit_boxplot_svg(const StudyReport& r, const std::string& path);

}  // namespace volseg
