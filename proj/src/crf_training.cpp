#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdqc/crf.hpp"
#include "sdqc/error.hpp"

namespace sdqc {

namespace {
constexpr int P = kNumLabels;
}  // namespace

std::string_view train_mode_name(TrainMode mode) {
  switch (mode) {
    case TrainMode::TreeCrf: return "tree_crf";
    case TrainMode::LinearCrf: return "linear_crf";
    case TrainMode::MaxEnt: return "maxent";
  }
  return "tree_crf";
}

std::optional<TrainMode> parse_train_mode(std::string_view name) {
  if (name == "tree_crf") return TrainMode::TreeCrf;
  if (name == "linear_crf") return TrainMode::LinearCrf;
  if (name == "maxent") return TrainMode::MaxEnt;
  return std::nullopt;
}

CrfModel::CrfModel(FeatureLayout layout, TrainMode mode, double lambda,
                   int transition_buckets)
    : layout_(std::move(layout)),
      mode_(mode),
      lambda_(lambda),
      feature_width_(layout_.total_width()),
      transition_buckets_(transition_buckets),
      node_weights_(static_cast<std::size_t>(P) * layout_.total_width(), 0.0),
      transition_(static_cast<std::size_t>(transition_buckets) * 16, 0.0) {
  if (transition_buckets < 1)
    throw Error(ErrorCode::InvalidSpec, "need at least one transition bucket");
}

std::vector<double> CrfModel::pack() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  flat.insert(flat.end(), node_weights_.begin(), node_weights_.end());
  flat.insert(flat.end(), transition_.begin(), transition_.end());
  flat.insert(flat.end(), bias_.begin(), bias_.end());
  return flat;
}

void CrfModel::unpack(std::span<const double> params) {
  if (params.size() != parameter_count())
    throw Error(ErrorCode::DimensionMismatch,
                "parameter vector has wrong length");
  std::copy_n(params.begin(), node_weights_.size(), node_weights_.begin());
  std::copy_n(params.begin() + node_weights_.size(), transition_.size(),
              transition_.begin());
  std::copy_n(params.begin() + node_weights_.size() + transition_.size(), 4,
              bias_.begin());
}

namespace {

double gold_score(const Potentials& pot, const CrfInstance& instance) {
  const InstanceShape& shape = instance.shape;
  double score = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const int y = label_index(*instance.gold[i]);
    score += pot.node(i, y);
    if (shape.parent[i] >= 0) {
      const int yp = label_index(
          *instance.gold[static_cast<std::size_t>(shape.parent[i])]);
      score += pot.edge_matrix(i)[yp * P + y];
    }
  }
  return score;
}

void validate_for_training(const CrfModel& model,
                           std::span<const CrfInstance> instances,
                           TrainMode mode) {
  // All throwing paths are exercised here so the OpenMP loop below stays
  // exception-free.
  for (const CrfInstance& inst : instances) {
    inst.shape.validate();
    if (mode == TrainMode::LinearCrf && !inst.shape.is_chain())
      throw Error(ErrorCode::NotATree,
                  "linear-chain training requires chain instances");
    if (inst.features.size() != inst.size() || inst.gold.size() != inst.size() ||
        (!inst.edge_bucket.empty() && inst.edge_bucket.size() != inst.size()))
      throw Error(ErrorCode::LengthMismatch,
                  "instance rows do not match instance nodes");
    for (std::size_t i = 0; i < inst.size(); ++i) {
      if (static_cast<int>(inst.features[i].size()) != model.feature_width())
        throw Error(ErrorCode::DimensionMismatch,
                    "feature width does not match model width");
      if (inst.bucket_of(i) < 0 ||
          inst.bucket_of(i) >= model.transition_buckets())
        throw Error(ErrorCode::DimensionMismatch,
                    "edge bucket out of range for this model");
      if (!inst.gold[i])
        throw Error(ErrorCode::MissingGoldLabel,
                    "training node lacks a gold label");
    }
  }
}

void instance_stats(const CrfModel& model, const CrfInstance& inst,
                    TrainMode mode, double& ll, InferenceResult& inf) {
  const Potentials pot = compute_potentials(model, inst, mode);
  inf = mode == TrainMode::LinearCrf ? chain_sum_product(pot)
                                     : sum_product(pot);
  ll = gold_score(pot, inst) - inf.log_partition;
}

}  // namespace

double log_likelihood(const CrfModel& model, const CrfInstance& instance,
                      TrainMode mode) {
  validate_for_training(model, std::span<const CrfInstance>(&instance, 1), mode);
  double ll = 0.0;
  InferenceResult inf;
  instance_stats(model, instance, mode, ll, inf);
  return ll;
}

BatchStats compute_batch_stats(const CrfModel& model,
                               std::span<const CrfInstance> instances,
                               TrainMode mode, bool parallel) {
  validate_for_training(model, instances, mode);
  const std::size_t n = instances.size();
  BatchStats stats;
  stats.log_likelihoods.resize(n);
  stats.inference.resize(n);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
      instance_stats(model, instances[i], mode, stats.log_likelihoods[i],
                     stats.inference[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      instance_stats(model, instances[i], mode, stats.log_likelihoods[i],
                     stats.inference[i]);
  }
  return stats;
}

namespace {

double regularizer(const CrfModel& model) {
  double sq = 0.0;
  for (double w : model.node_weights()) sq += w * w;
  for (double w : model.transitions()) sq += w * w;
  for (double w : model.biases()) sq += w * w;
  return 0.5 * model.lambda() * sq;
}

double objective_from_stats(const CrfModel& model, const BatchStats& stats) {
  double total = 0.0;
  for (double ll : stats.log_likelihoods) total += ll;
  return total - regularizer(model);
}

// empirical - expected statistics, accumulated in fixed instance order,
// minus the lambda*w penalty term.
std::vector<double> gradient_from_stats(const CrfModel& model,
                                        std::span<const CrfInstance> instances,
                                        const BatchStats& stats,
                                        TrainMode mode) {
  const int width = model.feature_width();
  std::vector<double> grad(model.parameter_count(), 0.0);
  double* g_nw = grad.data();
  double* g_tr = grad.data() + static_cast<std::size_t>(P) * width;
  double* g_b = g_tr + model.transitions().size();

  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const CrfInstance& inst = instances[idx];
    const InferenceResult& inf = stats.inference[idx];
    for (std::size_t i = 0; i < inst.size(); ++i) {
      const int gold = label_index(*inst.gold[i]);
      const std::vector<double>& x = inst.features[i];
      for (int y = 0; y < P; ++y) {
        const double coef =
            (y == gold ? 1.0 : 0.0) - inf.node_marginal(i, y);
        g_b[y] += coef;
        double* row = g_nw + static_cast<std::size_t>(y) * width;
        for (int f = 0; f < width; ++f) row[f] += coef * x[f];
      }
      if (mode != TrainMode::MaxEnt && inst.shape.parent[i] >= 0) {
        const int gp = label_index(
            *inst.gold[static_cast<std::size_t>(inst.shape.parent[i])]);
        double* block = g_tr + static_cast<std::size_t>(inst.bucket_of(i)) * 16;
        block[gp * P + gold] += 1.0;
        for (int k = 0; k < 16; ++k)
          block[k] -= inf.edge_marginals[i * 16 + k];
      }
    }
  }

  const std::vector<double> params = model.pack();
  for (std::size_t k = 0; k < params.size(); ++k)
    grad[k] -= model.lambda() * params[k];
  return grad;
}

}  // namespace

double objective_value(const CrfModel& model,
                       std::span<const CrfInstance> instances, TrainMode mode,
                       bool parallel) {
  const BatchStats stats = compute_batch_stats(model, instances, mode, parallel);
  return objective_from_stats(model, stats);
}

std::vector<double> gradient(const CrfModel& model,
                             std::span<const CrfInstance> instances,
                             TrainMode mode, bool parallel) {
  const BatchStats stats = compute_batch_stats(model, instances, mode, parallel);
  return gradient_from_stats(model, instances, stats, mode);
}

CrfModel train(std::span<const CrfInstance> instances,
               const TrainConfig& config, TrainMode mode) {
  if (instances.empty())
    throw Error(ErrorCode::EmptyTrainingSet, "no training instances");
  if (instances[0].features.empty())
    throw Error(ErrorCode::LengthMismatch, "first instance has no feature rows");
  FeatureLayout layout;
  layout.add("features", static_cast<int>(instances[0].features[0].size()));
  CrfModel model(std::move(layout), mode, config.lambda,
                 config.transition_buckets);
  return train_from(std::move(model), instances, config, mode);
}

CrfModel train_from(CrfModel model, std::span<const CrfInstance> instances,
                    const TrainConfig& config, TrainMode mode) {
  if (instances.empty())
    throw Error(ErrorCode::EmptyTrainingSet, "no training instances");
  validate_for_training(model, instances, mode);

  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-18;

  std::vector<double> w = model.pack();
  BatchStats stats = compute_batch_stats(model, instances, mode, config.parallel);
  double obj = objective_from_stats(model, stats);
  if (!std::isfinite(obj))
    throw Error(ErrorCode::NonFiniteObjective,
                "objective is not finite at the initial point");

  double warm_step = 1.0;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const std::vector<double> grad =
        gradient_from_stats(model, instances, stats, mode);
    double grad_inf = 0.0;
    double grad_sq = 0.0;
    for (double g : grad) {
      grad_inf = std::max(grad_inf, std::abs(g));
      grad_sq += g * g;
    }
    if (grad_inf <= config.gradient_tolerance) break;

    if (config.step_rule == TrainConfig::StepRule::Fixed) {
      for (std::size_t k = 0; k < w.size(); ++k)
        w[k] += config.fixed_step * grad[k];
      model.unpack(w);
      stats = compute_batch_stats(model, instances, mode, config.parallel);
      obj = objective_from_stats(model, stats);
      if (!std::isfinite(obj))
        throw Error(ErrorCode::NonFiniteObjective,
                    "objective diverged under the fixed step rule");
      continue;
    }

    // Backtracking line search on the ascent direction, warm-started from
    // the previous accepted step.
    double t = std::min(1.0, 2.0 * warm_step);
    bool accepted = false;
    std::vector<double> trial(w.size());
    while (t >= kMinStep) {
      for (std::size_t k = 0; k < w.size(); ++k) trial[k] = w[k] + t * grad[k];
      model.unpack(trial);
      BatchStats trial_stats =
          compute_batch_stats(model, instances, mode, config.parallel);
      const double trial_obj = objective_from_stats(model, trial_stats);
      if (std::isfinite(trial_obj) && trial_obj >= obj + kArmijo * t * grad_sq) {
        w.swap(trial);
        stats = std::move(trial_stats);
        obj = trial_obj;
        warm_step = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // No ascent step representable in floating point: numerically at the
      // optimum.
      model.unpack(w);
      break;
    }
  }
  model.unpack(w);
  return model;
}

std::vector<StanceLabel> predict(const CrfModel& model,
                                 const CrfInstance& instance, TrainMode mode) {
  const Potentials pot = compute_potentials(model, instance, mode);
  if (mode == TrainMode::MaxEnt) {
    std::vector<StanceLabel> labels(instance.size());
    for (std::size_t i = 0; i < instance.size(); ++i) {
      int best = 0;
      for (int y = 1; y < P; ++y)
        if (pot.node(i, y) > pot.node(i, best)) best = y;
      labels[i] = kLabelOrder[best];
    }
    return labels;
  }
  const MapResult map = mode == TrainMode::LinearCrf ? chain_max_product(pot)
                                                     : max_product(pot);
  return map.labels;
}

AggregatedPredictions aggregate_branch_predictions(
    const std::vector<std::pair<Branch, std::vector<StanceLabel>>>&
        branch_predictions) {
  if (branch_predictions.empty())
    throw Error(ErrorCode::EmptyInput, "no branch predictions to aggregate");
  // Votes keyed by tweet id; first-seen order kept for determinism even
  // though the output map is ordered.
  std::map<std::string, std::array<int, P>> votes;
  for (const auto& [branch, labels] : branch_predictions) {
    if (labels.size() != branch.path.size())
      throw Error(ErrorCode::LengthMismatch,
                  "branch labels do not match branch length");
    for (std::size_t i = 0; i < labels.size(); ++i)
      votes.try_emplace(branch.path[i]).first->second[label_index(labels[i])]++;
  }
  AggregatedPredictions out;
  for (const auto& [id, counts] : votes) {
    int best = 0;
    int total = 0;
    for (int y = 0; y < P; ++y) {
      total += counts[y];
      if (counts[y] > counts[best]) best = y;
    }
    if (counts[best] != total) out.disagreements++;
    out.labels.emplace(id, kLabelOrder[best]);
  }
  return out;
}

}  // namespace sdqc
