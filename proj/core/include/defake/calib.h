// core/include/defake/calib.h

// Copyright 2026  The Defake Authors
//
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

// Score calibration and fusion: posterior to LLR conversion, affine LLR
// calibration trained by prior-weighted logistic regression (K inputs gives
// LR fusion), min-max normalization, and average fusion.

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "defake/corpus.h"
#include "defake/metrics.h"

namespace defake {

// s -> w . s + b, an LLR when trained by TrainAffine.  K = weights.size()
// input systems; K = 1 is plain calibration.
struct AffineCalibrator {
  std::vector<double> weights;
  double bias = 0.0;
  double trained_prior = 0.5;
};

struct TrainConfig {
  double tol = 1e-8;  // gradient infinity-norm
  int max_iter = 100;
};

struct TrainReport {
  int n_iter = 0;
  double grad_inf_norm = 0.0;
  bool converged = false;
};

// log(p/(1-p)) - log(prior/(1-prior)), with p clamped to
// [1e-12, 1 - 1e-12] first; *n_clamped (when given) sums clamp events.
double PosteriorToLlr(double p, double train_prior,
                      std::size_t* n_clamped = nullptr);

// ScoreSet version; input must be tagged posterior, output is tagged llr.
ScoreSet PosteriorsToLlr(const ScoreSet& s, double train_prior,
                         std::size_t* n_clamped = nullptr);

// Cost-aligned training prior:
//   p_target * c_miss / (p_target * c_miss + (1 - p_target) * c_fa).
double EffectivePrior(const CostParams& costs);

// Minimizes the prior-weighted cross-entropy
//   pi/N_b   * sum_bona  softplus(-(w.s + b + tau))
// + (1-pi)/N_s * sum_spoof softplus( w.s + b + tau),   tau = logit(pi),
// by damped Newton steps with backtracking.  The tau offset lives only in
// training; the returned transform w.s + b emits LLRs.  Starting from the
// identity (w = 1/K, b = 0) makes the fit never worse than no calibration.
// When the iteration limit is hit: with a report, the best iterate is
// returned and report->converged is false; without one, NoConvergence.
AffineCalibrator TrainAffine(const Eigen::MatrixXd& dev_scores,
                             const std::vector<ClassLabel>& labels,
                             double effective_prior,
                             const TrainConfig& cfg = {},
                             TrainReport* report = nullptr);

double ApplyAffine(const AffineCalibrator& c, std::span<const double> scores);

std::vector<double> ApplyAffine(const AffineCalibrator& c,
                                const Eigen::MatrixXd& scores);

// K = 1 convenience; the result is tagged llr.
ScoreSet ApplyAffine(const AffineCalibrator& c, const ScoreSet& s);

struct MinMaxNormalizer {
  double min = 0.0;
  double max = 1.0;
};

// Fits on development scores; all-equal input is DegenerateRange.
MinMaxNormalizer MinMaxFit(std::span<const double> dev_scores);
MinMaxNormalizer MinMaxFit(const ScoreSet& dev);

// clamp((s - min) / (max - min), 0, 1)
double MinMaxApply(const MinMaxNormalizer& n, double s);
ScoreSet MinMaxApply(const MinMaxNormalizer& n, const ScoreSet& s);

// Per-utterance arithmetic mean of score sets over identical id sets; every
// input value must lie in [0, 1].  The result is tagged raw: averaged
// normalized scores are not LLRs.  Output follows the first input's order.
ScoreSet AverageFuse(const std::vector<ScoreSet>& inputs);

// Three-line text form: "weights w1 ... wK", "bias b", "prior pi".
// Round trips bit-exactly.
std::string SerializeCalibrator(const AffineCalibrator& c);
AffineCalibrator ParseCalibrator(const std::string& text);

}  // namespace defake
