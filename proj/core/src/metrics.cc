// core/src/metrics.cc

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

#include "defake/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "defake/error.h"

namespace defake {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckClasses(std::span<const double> bona, std::span<const double> spoof) {
  if (bona.empty()) {
    throw Error(ErrorCode::kEmptyClass, "empty bonafide score vector");
  }
  if (spoof.empty()) {
    throw Error(ErrorCode::kEmptyClass, "empty spoof score vector");
  }
  for (const double s : bona) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFiniteScore, "non-finite bonafide score");
    }
  }
  for (const double s : spoof) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFiniteScore, "non-finite spoof score");
    }
  }
}

void RequireLlr(const JoinedScores& joined, const char* op) {
  if (joined.semantics != ScoreSemantics::kLlr) {
    throw Error(ErrorCode::kSemanticsMismatch,
                std::string(op) + " requires scores tagged llr, got " +
                    ScoreSemanticsName(joined.semantics));
  }
}

// max(x, 0) + log1p(exp(-|x|)); exact for |x| far beyond 1e4.
double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

void CostParams::Validate() const {
  if (!(p_target > 0.0) || !(p_target < 1.0) || !std::isfinite(p_target)) {
    throw Error(ErrorCode::kBadArgument,
                "p_target must lie strictly inside (0, 1)");
  }
  if (!(c_miss > 0.0) || !std::isfinite(c_miss) || !(c_fa > 0.0) ||
      !std::isfinite(c_fa)) {
    throw Error(ErrorCode::kBadArgument, "costs must be positive and finite");
  }
}

DetCurve ComputeDetCurve(std::span<const double> bona,
                         std::span<const double> spoof) {
  CheckClasses(bona, spoof);

  std::vector<double> b(bona.begin(), bona.end());
  std::vector<double> s(spoof.begin(), spoof.end());
  std::sort(b.begin(), b.end());
  std::sort(s.begin(), s.end());

  std::vector<double> pooled;
  pooled.reserve(b.size() + s.size());
  pooled.insert(pooled.end(), b.begin(), b.end());
  pooled.insert(pooled.end(), s.begin(), s.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

  DetCurve curve;
  curve.points.reserve(pooled.size() + 1);
  curve.points.push_back({-kInf, 0.0, 1.0});

  const double nb = static_cast<double>(b.size());
  const double ns = static_cast<double>(s.size());
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
    const double t = pooled[i] + (pooled[i + 1] - pooled[i]) / 2.0;
    // p_miss: bona scores strictly below t; p_fa: spoof scores >= t.
    const auto nb_below =
        std::lower_bound(b.begin(), b.end(), t) - b.begin();
    const auto ns_below =
        std::lower_bound(s.begin(), s.end(), t) - s.begin();
    curve.points.push_back({t, static_cast<double>(nb_below) / nb,
                            static_cast<double>(s.size() - ns_below) / ns});
  }
  curve.points.push_back({kInf, 1.0, 0.0});
  return curve;
}

EerResult ComputeEer(std::span<const double> bona,
                     std::span<const double> spoof) {
  const DetCurve curve = ComputeDetCurve(bona, spoof);
  const auto& pts = curve.points;

  // diff = p_miss - p_fa rises from -1 to +1 along the curve; the EER sits
  // where it crosses zero.
  std::size_t hi = 0;
  while (pts[hi].p_miss - pts[hi].p_fa < 0.0) ++hi;
  if (hi == 0) {
    // p_miss(-inf) = 0 and p_fa(-inf) = 1, so diff at the first point is -1
    // and the loop always advances at least once.
    throw Error(ErrorCode::kBadArgument, "degenerate operating-point sweep");
  }
  const auto& lo_pt = pts[hi - 1];
  const auto& hi_pt = pts[hi];
  const double d_lo = lo_pt.p_miss - lo_pt.p_fa;
  const double d_hi = hi_pt.p_miss - hi_pt.p_fa;

  EerResult result;
  if (d_hi == 0.0) {
    result.eer = hi_pt.p_miss;
    result.threshold = hi_pt.threshold;
    return result;
  }
  const double alpha = (0.0 - d_lo) / (d_hi - d_lo);
  result.eer = lo_pt.p_miss + alpha * (hi_pt.p_miss - lo_pt.p_miss);
  // The crossing is interior: diff is -1 at -inf and +1 at +inf, and the
  // first/last finite midpoints already reach those extremes, so both
  // bracketing thresholds are finite whenever alpha is fractional.
  if (std::isfinite(lo_pt.threshold) && std::isfinite(hi_pt.threshold)) {
    result.threshold =
        lo_pt.threshold + alpha * (hi_pt.threshold - lo_pt.threshold);
  } else {
    result.threshold = std::isfinite(lo_pt.threshold) ? lo_pt.threshold
                                                      : hi_pt.threshold;
  }
  return result;
}

DcfResult ComputeMinDcf(std::span<const double> bona,
                        std::span<const double> spoof,
                        const CostParams& costs) {
  costs.Validate();
  const DetCurve curve = ComputeDetCurve(bona, spoof);

  const double w_miss = costs.c_miss * costs.p_target;
  const double w_fa = costs.c_fa * (1.0 - costs.p_target);
  const double norm = std::min(w_miss, w_fa);

  DcfResult best;
  best.dcf = kInf;
  for (const auto& pt : curve.points) {
    const double dcf = (w_miss * pt.p_miss + w_fa * pt.p_fa) / norm;
    if (dcf < best.dcf) {
      best.dcf = dcf;
      best.threshold = pt.threshold;
    }
  }
  return best;
}

double BayesThreshold(const CostParams& costs) {
  costs.Validate();
  return std::log(((1.0 - costs.p_target) * costs.c_fa) /
                  (costs.p_target * costs.c_miss));
}

double ComputeActDcf(std::span<const double> bona_llr,
                     std::span<const double> spoof_llr,
                     const CostParams& costs) {
  CheckClasses(bona_llr, spoof_llr);
  const double t = BayesThreshold(costs);

  std::size_t misses = 0;
  for (const double s : bona_llr) {
    if (s < t) ++misses;
  }
  std::size_t fas = 0;
  for (const double s : spoof_llr) {
    if (s >= t) ++fas;
  }
  const double p_miss =
      static_cast<double>(misses) / static_cast<double>(bona_llr.size());
  const double p_fa =
      static_cast<double>(fas) / static_cast<double>(spoof_llr.size());

  const double w_miss = costs.c_miss * costs.p_target;
  const double w_fa = costs.c_fa * (1.0 - costs.p_target);
  return (w_miss * p_miss + w_fa * p_fa) / std::min(w_miss, w_fa);
}

double ComputeCllr(std::span<const double> bona_llr,
                   std::span<const double> spoof_llr) {
  CheckClasses(bona_llr, spoof_llr);
  constexpr double kLog2 = 0.6931471805599453;  // ln 2

  // Summed in sorted order so the result is exactly permutation-invariant.
  std::vector<double> b(bona_llr.begin(), bona_llr.end());
  std::vector<double> s_(spoof_llr.begin(), spoof_llr.end());
  std::sort(b.begin(), b.end());
  std::sort(s_.begin(), s_.end());

  double bona_sum = 0.0;
  for (const double s : b) bona_sum += Softplus(-s);
  double spoof_sum = 0.0;
  for (const double s : s_) spoof_sum += Softplus(s);

  const double bona_mean = bona_sum / static_cast<double>(b.size());
  const double spoof_mean = spoof_sum / static_cast<double>(s_.size());
  return (bona_mean + spoof_mean) / (2.0 * kLog2);
}

EerResult ComputeEer(const JoinedScores& joined) {
  return ComputeEer(joined.bonafide, joined.spoof);
}

DcfResult ComputeMinDcf(const JoinedScores& joined, const CostParams& costs) {
  return ComputeMinDcf(joined.bonafide, joined.spoof, costs);
}

double ComputeActDcf(const JoinedScores& joined, const CostParams& costs) {
  RequireLlr(joined, "act_dcf");
  return ComputeActDcf(joined.bonafide, joined.spoof, costs);
}

double ComputeCllr(const JoinedScores& joined) {
  RequireLlr(joined, "cllr");
  return ComputeCllr(joined.bonafide, joined.spoof);
}

}  // namespace defake
