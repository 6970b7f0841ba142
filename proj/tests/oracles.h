// tests/oracles.h

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

// Independent reference implementations used to check the library: naive
// counting loops and exhaustive sweeps, written for obviousness rather than
// speed, sharing no code with core/.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace defake::oracle {

// All candidate decision thresholds that can matter for counting metrics:
// midpoints of consecutive distinct pooled scores plus the accept-all and
// reject-all extremes.
inline std::vector<double> CandidateThresholds(
    const std::vector<double>& bona, const std::vector<double>& spoof) {
  std::vector<double> pooled = bona;
  pooled.insert(pooled.end(), spoof.begin(), spoof.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  std::vector<double> candidates;
  candidates.push_back(-std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
    candidates.push_back(pooled[i] + (pooled[i + 1] - pooled[i]) / 2.0);
  }
  candidates.push_back(std::numeric_limits<double>::infinity());
  return candidates;
}

inline double PMiss(const std::vector<double>& bona, double t) {
  std::size_t n = 0;
  for (const double s : bona) {
    if (s < t) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(bona.size());
}

inline double PFa(const std::vector<double>& spoof, double t) {
  std::size_t n = 0;
  for (const double s : spoof) {
    if (s >= t) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(spoof.size());
}

// Brute-force EER: walk the candidate thresholds until p_miss - p_fa turns
// nonnegative, then interpolate linearly on (p_miss - p_fa).
struct BruteEer {
  double eer;
  double threshold;
};

inline BruteEer BruteForceEer(const std::vector<double>& bona,
                              const std::vector<double>& spoof) {
  const std::vector<double> ts = CandidateThresholds(bona, spoof);
  std::size_t hi = 0;
  while (PMiss(bona, ts[hi]) - PFa(spoof, ts[hi]) < 0.0) ++hi;

  const double d_hi = PMiss(bona, ts[hi]) - PFa(spoof, ts[hi]);
  if (d_hi == 0.0) {
    return {PMiss(bona, ts[hi]), ts[hi]};
  }
  const double d_lo = PMiss(bona, ts[hi - 1]) - PFa(spoof, ts[hi - 1]);
  const double alpha = -d_lo / (d_hi - d_lo);
  const double eer = PMiss(bona, ts[hi - 1]) +
                     alpha * (PMiss(bona, ts[hi]) - PMiss(bona, ts[hi - 1]));
  double threshold;
  if (std::isfinite(ts[hi - 1]) && std::isfinite(ts[hi])) {
    threshold = ts[hi - 1] + alpha * (ts[hi] - ts[hi - 1]);
  } else {
    threshold = std::isfinite(ts[hi - 1]) ? ts[hi - 1] : ts[hi];
  }
  return {eer, threshold};
}

struct BruteDcf {
  double dcf;
  double threshold;
};

inline BruteDcf BruteForceMinDcf(const std::vector<double>& bona,
                                 const std::vector<double>& spoof,
                                 double p_target, double c_miss, double c_fa) {
  const std::vector<double> ts = CandidateThresholds(bona, spoof);
  const double norm =
      std::min(c_miss * p_target, c_fa * (1.0 - p_target));
  BruteDcf best{std::numeric_limits<double>::infinity(), 0.0};
  for (const double t : ts) {
    const double dcf = (c_miss * p_target * PMiss(bona, t) +
                        c_fa * (1.0 - p_target) * PFa(spoof, t)) /
                       norm;
    if (dcf < best.dcf) {
      best.dcf = dcf;
      best.threshold = t;
    }
  }
  return best;
}

// Weighted binary cross-entropy of an affine score-to-LLR map, written the
// obvious way (safe because test scores stay small).
inline double NaiveObjective(const std::vector<std::vector<double>>& scores,
                             const std::vector<bool>& is_bona, double prior,
                             const std::vector<double>& w, double b) {
  const double tau = std::log(prior / (1.0 - prior));
  std::size_t n_bona = 0, n_spoof = 0;
  for (const bool y : is_bona) (y ? n_bona : n_spoof)++;

  double bona_sum = 0.0, spoof_sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double z = b;
    for (std::size_t k = 0; k < w.size(); ++k) z += w[k] * scores[i][k];
    const double a = z + tau;
    if (is_bona[i]) {
      bona_sum += std::log1p(std::exp(-a));
    } else {
      spoof_sum += std::log1p(std::exp(a));
    }
  }
  return prior * bona_sum / static_cast<double>(n_bona) +
         (1.0 - prior) * spoof_sum / static_cast<double>(n_spoof);
}

}  // namespace defake::oracle
