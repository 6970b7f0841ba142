// core/src/calib.cc

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

#include "defake/calib.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "defake/error.h"
#include "defake/util.h"

namespace defake {

namespace {

constexpr double kPosteriorEps = 1e-12;

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Logit(double p) { return std::log(p) - std::log1p(-p); }

double ParseNumber(std::string_view token, std::int64_t line_no) {
  double value = 0.0;
  if (!ParseDouble(token, &value)) {
    throw Error(ErrorCode::kMalformedLine,
                "cannot parse number '" + std::string(token) + "'", "",
                line_no);
  }
  return value;
}

void RequirePrior(double prior) {
  if (!(prior > 0.0 && prior < 1.0)) {
    throw Error(ErrorCode::kBadArgument, "prior must lie strictly in (0, 1)");
  }
}

}  // namespace

double PosteriorToLlr(double p, double train_prior, std::size_t* n_clamped) {
  RequirePrior(train_prior);
  if (!std::isfinite(p)) {
    throw Error(ErrorCode::kNonFiniteScore, "posterior is not finite");
  }
  if (p < kPosteriorEps || p > 1.0 - kPosteriorEps) {
    if (n_clamped != nullptr) ++*n_clamped;
    p = std::clamp(p, kPosteriorEps, 1.0 - kPosteriorEps);
  }
  return Logit(p) - Logit(train_prior);
}

ScoreSet PosteriorsToLlr(const ScoreSet& s, double train_prior,
                         std::size_t* n_clamped) {
  if (s.semantics != ScoreSemantics::kPosterior) {
    throw Error(ErrorCode::kSemanticsMismatch,
                std::string("expected posterior scores, got ") +
                    ScoreSemanticsName(s.semantics));
  }
  ScoreSet out = s;
  out.semantics = ScoreSemantics::kLlr;
  for (auto& entry : out.entries) {
    entry.score = PosteriorToLlr(entry.score, train_prior, n_clamped);
  }
  return out;
}

double EffectivePrior(const CostParams& costs) {
  costs.Validate();
  const double num = costs.p_target * costs.c_miss;
  return num / (num + (1.0 - costs.p_target) * costs.c_fa);
}

AffineCalibrator TrainAffine(const Eigen::MatrixXd& dev_scores,
                             const std::vector<ClassLabel>& labels,
                             double effective_prior, const TrainConfig& cfg,
                             TrainReport* report) {
  RequirePrior(effective_prior);
  const Eigen::Index n = dev_scores.rows();
  const Eigen::Index k = dev_scores.cols();
  if (n == 0 || k == 0) {
    throw Error(ErrorCode::kEmptyInput, "empty development score matrix");
  }
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(ErrorCode::kBadArgument,
                "label count does not match score rows");
  }
  if (!dev_scores.allFinite()) {
    throw Error(ErrorCode::kNonFiniteScore,
                "development scores must be finite");
  }
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw Error(ErrorCode::kBadArgument, "tol must be > 0, max_iter >= 1");
  }

  Eigen::Index n_bona = 0;
  for (ClassLabel l : labels) n_bona += l == ClassLabel::kBonafide ? 1 : 0;
  const Eigen::Index n_spoof = n - n_bona;
  if (n_bona == 0 || n_spoof == 0) {
    throw Error(ErrorCode::kEmptyClass,
                "training needs both bonafide and spoof examples");
  }

  const double tau = Logit(effective_prior);
  // Per-example objective weight and activation sign: bonafide terms are
  // softplus(-a), spoof terms softplus(+a).
  Eigen::VectorXd wt(n), sign(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool bona = labels[static_cast<std::size_t>(i)] ==
                      ClassLabel::kBonafide;
    wt(i) = bona ? effective_prior / static_cast<double>(n_bona)
                 : (1.0 - effective_prior) / static_cast<double>(n_spoof);
    sign(i) = bona ? -1.0 : 1.0;
  }

  // theta = [w; b], started at the identity transform.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(k + 1);
  theta.head(k).setConstant(1.0 / static_cast<double>(k));

  const auto activations = [&](const Eigen::VectorXd& t) {
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      a(i) = dev_scores.row(i).dot(t.head(k)) + t(k) + tau;
    }
    return a;
  };
  const auto objective = [&](const Eigen::VectorXd& a) {
    double obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) obj += wt(i) * Softplus(sign(i) * a(i));
    return obj;
  };
  const auto derivatives = [&](const Eigen::VectorXd& a, Eigen::VectorXd* grad,
                               Eigen::MatrixXd* hess) {
    grad->setZero(k + 1);
    if (hess != nullptr) hess->setZero(k + 1, k + 1);
    Eigen::VectorXd x(k + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g_a = wt(i) * sign(i) * Sigmoid(sign(i) * a(i));
      x.head(k) = dev_scores.row(i).transpose();
      x(k) = 1.0;
      *grad += g_a * x;
      if (hess != nullptr) {
        const double h_a = wt(i) * Sigmoid(a(i)) * Sigmoid(-a(i));
        *hess += h_a * x * x.transpose();
      }
    }
  };

  TrainReport local;
  Eigen::VectorXd a = activations(theta);
  double obj = objective(a);
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    derivatives(a, &grad, &hess);
    local.grad_inf_norm = grad.lpNorm<Eigen::Infinity>();
    local.n_iter = iter;
    if (local.grad_inf_norm < cfg.tol) {
      local.converged = true;
      break;
    }

    // Tiny ridge keeps the solve defined on (near-)singular Hessians, e.g.
    // duplicated columns or separable data pushed far into saturation.
    const double ridge =
        1e-12 * std::max(hess.diagonal().maxCoeff(), 1e-300);
    Eigen::MatrixXd damped = hess;
    damped.diagonal().array() += ridge;
    Eigen::VectorXd step = damped.ldlt().solve(-grad);
    double descent = grad.dot(step);
    if (!step.allFinite() || descent >= 0.0) {
      step = -grad;
      descent = grad.dot(step);
    }

    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::VectorXd trial = theta + t * step;
      const Eigen::VectorXd a_trial = activations(trial);
      const double obj_trial = objective(a_trial);
      if (obj_trial <= obj + 1e-4 * t * descent) {
        theta = trial;
        a = a_trial;
        obj = obj_trial;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;  // objective is flat to float precision
  }

  if (!local.converged) {
    // The loop body's norm describes the pre-step point; report the final
    // iterate's gradient instead.
    Eigen::VectorXd grad;
    derivatives(a, &grad, nullptr);
    local.grad_inf_norm = grad.lpNorm<Eigen::Infinity>();
    local.converged = local.grad_inf_norm < cfg.tol;
  }
  if (!local.converged && report == nullptr) {
    throw Error(ErrorCode::kNoConvergence,
                "gradient infinity-norm " + FormatDouble(local.grad_inf_norm) +
                    " after " + std::to_string(local.n_iter) + " iterations");
  }
  if (report != nullptr) *report = local;

  AffineCalibrator c;
  c.weights.assign(theta.data(), theta.data() + k);
  c.bias = theta(k);
  c.trained_prior = effective_prior;
  return c;
}

double ApplyAffine(const AffineCalibrator& c, std::span<const double> scores) {
  if (scores.size() != c.weights.size()) {
    throw Error(ErrorCode::kWidthMismatch,
                "calibrator takes " + std::to_string(c.weights.size()) +
                    " scores, got " + std::to_string(scores.size()));
  }
  double acc = c.bias;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    acc += c.weights[i] * scores[i];
  }
  return acc;
}

std::vector<double> ApplyAffine(const AffineCalibrator& c,
                                const Eigen::MatrixXd& scores) {
  if (static_cast<std::size_t>(scores.cols()) != c.weights.size()) {
    throw Error(ErrorCode::kWidthMismatch,
                "calibrator takes " + std::to_string(c.weights.size()) +
                    " columns, got " + std::to_string(scores.cols()));
  }
  std::vector<double> out(static_cast<std::size_t>(scores.rows()));
  std::vector<double> row(c.weights.size());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = scores(i, static_cast<Eigen::Index>(j));
    }
    out[static_cast<std::size_t>(i)] = ApplyAffine(c, row);
  }
  return out;
}

ScoreSet ApplyAffine(const AffineCalibrator& c, const ScoreSet& s) {
  if (c.weights.size() != 1) {
    throw Error(ErrorCode::kWidthMismatch,
                "score-set calibration needs a single-input calibrator");
  }
  ScoreSet out = s;
  out.semantics = ScoreSemantics::kLlr;
  for (auto& entry : out.entries) {
    entry.score = c.weights[0] * entry.score + c.bias;
  }
  return out;
}

MinMaxNormalizer MinMaxFit(std::span<const double> dev_scores) {
  if (dev_scores.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no development scores to fit");
  }
  MinMaxNormalizer n;
  n.min = dev_scores[0];
  n.max = dev_scores[0];
  for (double s : dev_scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonFiniteScore,
                  "development score is not finite");
    }
    n.min = std::min(n.min, s);
    n.max = std::max(n.max, s);
  }
  if (n.max <= n.min) {
    throw Error(ErrorCode::kDegenerateRange,
                "all development scores equal " + FormatDouble(n.min));
  }
  return n;
}

MinMaxNormalizer MinMaxFit(const ScoreSet& dev) {
  std::vector<double> values;
  values.reserve(dev.entries.size());
  for (const auto& entry : dev.entries) values.push_back(entry.score);
  return MinMaxFit(values);
}

double MinMaxApply(const MinMaxNormalizer& n, double s) {
  if (!(n.max > n.min)) {
    throw Error(ErrorCode::kDegenerateRange, "normalizer has max <= min");
  }
  return std::clamp((s - n.min) / (n.max - n.min), 0.0, 1.0);
}

ScoreSet MinMaxApply(const MinMaxNormalizer& n, const ScoreSet& s) {
  ScoreSet out = s;
  out.semantics = ScoreSemantics::kRaw;
  for (auto& entry : out.entries) entry.score = MinMaxApply(n, entry.score);
  return out;
}

ScoreSet AverageFuse(const std::vector<ScoreSet>& inputs) {
  if (inputs.empty()) {
    throw Error(ErrorCode::kEmptyInput, "nothing to fuse");
  }
  const ScoreSet& first = inputs.front();
  for (std::size_t k = 1; k < inputs.size(); ++k) {
    if (inputs[k].entries.size() != first.entries.size()) {
      throw Error(ErrorCode::kIdSetMismatch,
                  "input " + std::to_string(k) + " has " +
                      std::to_string(inputs[k].entries.size()) +
                      " utterances, expected " +
                      std::to_string(first.entries.size()));
    }
  }

  ScoreSet out;
  out.semantics = ScoreSemantics::kRaw;
  out.entries.reserve(first.entries.size());
  for (const auto& entry : first.entries) {
    double acc = 0.0;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      const ScoreSet& s = inputs[k];
      if (k > 0 && !s.Has(entry.utt_id)) {
        throw Error(ErrorCode::kIdSetMismatch,
                    "input " + std::to_string(k) + " is missing an utterance",
                    entry.utt_id);
      }
      const double v = k == 0 ? entry.score : s.ScoreOf(entry.utt_id);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kScoreOutOfRange,
                    "fusion input " + FormatDouble(v) +
                        " lies outside [0, 1]; normalize first",
                    entry.utt_id);
      }
      acc += v;
    }
    out.entries.push_back(
        {entry.utt_id, acc / static_cast<double>(inputs.size())});
    out.index.emplace(entry.utt_id, out.entries.size() - 1);
  }
  return out;
}

std::string SerializeCalibrator(const AffineCalibrator& c) {
  std::string out = "weights";
  for (double w : c.weights) {
    out += ' ';
    out += FormatDouble(w);
  }
  out += "\nbias " + FormatDouble(c.bias);
  out += "\nprior " + FormatDouble(c.trained_prior);
  out += '\n';
  return out;
}

AffineCalibrator ParseCalibrator(const std::string& text) {
  AffineCalibrator c;
  bool have_weights = false, have_bias = false, have_prior = false;
  ForEachLine(text, [&](std::int64_t line_no, std::string_view line) {
    const std::string_view trimmed = TrimWhitespace(line);
    if (trimmed.empty() || trimmed.front() == '#') return;
    const std::vector<std::string_view> fields = SplitFields(trimmed);
    if (fields[0] == "weights") {
      if (have_weights || fields.size() < 2) {
        throw Error(ErrorCode::kMalformedLine,
                    "expected one 'weights w1 ... wK' line", "", line_no);
      }
      for (std::size_t i = 1; i < fields.size(); ++i) {
        c.weights.push_back(ParseNumber(fields[i], line_no));
      }
      have_weights = true;
    } else if (fields[0] == "bias") {
      if (have_bias || fields.size() != 2) {
        throw Error(ErrorCode::kMalformedLine, "expected one 'bias b' line",
                    "", line_no);
      }
      c.bias = ParseNumber(fields[1], line_no);
      have_bias = true;
    } else if (fields[0] == "prior") {
      if (have_prior || fields.size() != 2) {
        throw Error(ErrorCode::kMalformedLine, "expected one 'prior p' line",
                    "", line_no);
      }
      c.trained_prior = ParseNumber(fields[1], line_no);
      have_prior = true;
    } else {
      throw Error(ErrorCode::kMalformedLine,
                  "unknown calibrator field '" + std::string(fields[0]) + "'",
                  "", line_no);
    }
  });
  if (!have_weights || !have_bias || !have_prior) {
    throw Error(ErrorCode::kEmptyInput,
                "calibrator file needs weights, bias, and prior lines");
  }
  for (double w : c.weights) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kNonFiniteScore, "calibrator weight not finite");
    }
  }
  if (!std::isfinite(c.bias)) {
    throw Error(ErrorCode::kNonFiniteScore, "calibrator bias not finite");
  }
  RequirePrior(c.trained_prior);
  return c;
}

}  // namespace defake
