// core/include/defake/metrics.h

// Copyright 2026  The Defake Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Two-class detection metrics: EER, normalized minimum and actual DCF, and
// Cllr.  Convention throughout: higher score means more bona fide, a trial
// is accepted (called bona fide) iff score >= threshold, p_miss(t) is the
// fraction of bona fide scores below t and p_fa(t) the fraction of spoof
// scores at or above t.

#pragma once

#include <span>
#include <vector>

#include "defake/corpus.h"

namespace defake {

struct CostParams {
  double p_target = 0.05;  // prior of bona fide
  double c_miss = 1.0;     // cost of rejecting bona fide
  double c_fa = 10.0;      // cost of accepting spoof

  // Throws BadArgument unless p_target in (0,1) and both costs positive.
  void Validate() const;
};

// Operating points swept over increasing threshold.  Thresholds are the
// midpoints between consecutive distinct pooled scores plus the two
// degenerate endpoints -inf (accept all) and +inf (reject all), which makes
// the point list exhaustive: every achievable (p_miss, p_fa) pair appears.
struct DetCurve {
  struct Point {
    double threshold;
    double p_miss;
    double p_fa;
  };
  std::vector<Point> points;
};

DetCurve ComputeDetCurve(std::span<const double> bona,
                         std::span<const double> spoof);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// EER at the crossing of p_miss and p_fa, linearly interpolated between the
// two adjacent operating points.  The crossing always lies between finite
// thresholds, so the interpolated threshold is finite.
EerResult ComputeEer(std::span<const double> bona,
                     std::span<const double> spoof);

struct DcfResult {
  double dcf = 0.0;
  double threshold = 0.0;  // +-inf at the degenerate optima
};

// Minimum over the DetCurve of
//   c_miss * p_target * p_miss(t) + c_fa * (1 - p_target) * p_fa(t)
// normalized by min(c_miss * p_target, c_fa * (1 - p_target)).  The
// degenerate accept-all / reject-all points bound the result by 1.
DcfResult ComputeMinDcf(std::span<const double> bona,
                        std::span<const double> spoof,
                        const CostParams& costs);

// t = log(((1 - p_target) * c_fa) / (p_target * c_miss)); a calibrated LLR
// is accepted iff llr >= t.
double BayesThreshold(const CostParams& costs);

// Normalized DCF evaluated at BayesThreshold(costs).  Inputs must be LLRs;
// use the JoinedScores overload to have the semantics tag enforced.
double ComputeActDcf(std::span<const double> bona_llr,
                     std::span<const double> spoof_llr,
                     const CostParams& costs);

// Cllr = 1/2 [ mean_bona log2(1 + e^-s) + mean_spoof log2(1 + e^s) ],
// evaluated with the stable softplus form.
double ComputeCllr(std::span<const double> bona_llr,
                   std::span<const double> spoof_llr);

// Semantics-checked wrappers.  EER and minDCF accept any semantics; actDCF
// and Cllr throw SemanticsMismatch unless the join is tagged llr.
EerResult ComputeEer(const JoinedScores& joined);
DcfResult ComputeMinDcf(const JoinedScores& joined, const CostParams& costs);
double ComputeActDcf(const JoinedScores& joined, const CostParams& costs);
double ComputeCllr(const JoinedScores& joined);

}  // namespace defake
