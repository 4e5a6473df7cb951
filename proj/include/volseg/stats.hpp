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

#include <vector>

namespace volseg {

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int df = 0;
  // Zero variance with non-zero mean difference: p is reported as 0 and
  // t as a signed infinity.
  bool degenerate_variance = false;
};

// Two-sided paired Student t-test on the differences x - y.
// Requires equal lengths, n >= 2. All-zero differences give t=0, p=1.
TTestResult paired_t_test(const std::vector<double>& x,
                          const std::vector<double>& y);

// Two-sided p-value from the Student-t CDF, via the regularized
// incomplete beta function.
double student_t_two_sided_p(double t, int df);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_incomplete_beta(double a, double b, double x);

double mean(const std::vector<double>& v);
double stddev_sample(const std::vector<double>& v);

// Quantile with linear interpolation between order statistics; q in [0,1].
double quantile(std::vector<double> values, double q);
double median(const std::vector<double>& v);

}  // namespace volseg
