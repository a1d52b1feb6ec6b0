#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdqc/conversation.hpp"
#include "sdqc/features.hpp"
#include "sdqc/labels.hpp"

namespace sdqc {

// Topology of one instance graph. Nodes are ordered parent-before-child
// (node 0 is the root), which both passes of message passing rely on.
struct InstanceShape {
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<int>> children;  // derived from parent

  static InstanceShape chain(std::size_t n);
  static InstanceShape from_tree(const ConversationTree& tree);
  static InstanceShape from_parents(std::vector<int> parent);

  std::size_t size() const { return parent.size(); }
  bool is_chain() const;
  std::size_t edge_count() const { return parent.empty() ? 0 : parent.size() - 1; }

  // Throws NotATree unless exactly node 0 is a root and every other node's
  // parent precedes it.
  void validate() const;
};

// One unit of training or prediction: a tree for Tree CRF, a branch chain
// for Linear CRF, a single node for MaxEnt.
struct CrfInstance {
  InstanceShape shape;
  std::vector<std::vector<double>> features;        // per node
  std::vector<std::optional<StanceLabel>> gold;     // per node
  std::vector<std::string> tweet_ids;               // per node, may be empty
  // Transition bucket of the edge entering each node (root entry unused).
  // Empty means bucket 0 everywhere; only depth-bucketed models use more.
  std::vector<int> edge_bucket;

  std::size_t size() const { return shape.size(); }
  int bucket_of(std::size_t i) const {
    return edge_bucket.empty() ? 0 : edge_bucket[i];
  }
};

// Bucket of the edge entering a node at `child_depth`: 0 for depth 0->1,
// 1 for 1->2, 2 for anything deeper.
int depth_transition_bucket(int child_depth);

enum class TrainMode { TreeCrf, LinearCrf, MaxEnt };

std::string_view train_mode_name(TrainMode mode);
std::optional<TrainMode> parse_train_mode(std::string_view name);

// Log-domain factors of one instance: a 4-vector per node plus one 4x4
// transition matrix per bucket (rows index the parent label). Models
// without depth bucketing have a single matrix shared by every edge.
struct Potentials {
  const InstanceShape* shape = nullptr;
  std::vector<double> node_log;                  // size() x 4, row-major
  std::vector<std::array<double, 16>> edge_log;  // one matrix per bucket
  std::vector<int> edge_bucket;                  // per node, 0 for the root

  double node(std::size_t i, int y) const { return node_log[i * kNumLabels + y]; }
  // Transition matrix of the edge entering node i.
  const double* edge_matrix(std::size_t i) const {
    return edge_log[edge_bucket[i]].data();
  }
};

struct InferenceResult {
  double log_partition = 0.0;
  // node_marginals[i*4+y]
  std::vector<double> node_marginals;
  // edge_marginals[i*16 + yp*4 + yc] for the edge (parent(i), i); the block
  // for node 0 is unused and left zero.
  std::vector<double> edge_marginals;

  double node_marginal(std::size_t i, int y) const {
    return node_marginals[i * kNumLabels + y];
  }
  double edge_marginal(std::size_t child, int yp, int yc) const {
    return edge_marginals[child * 16 + yp * kNumLabels + yc];
  }
};

struct MapResult {
  std::vector<StanceLabel> labels;
  double score = 0.0;  // unnormalized log-probability of the labeling
};

struct TrainConfig {
  double lambda = 1.0;
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;  // infinity norm
  enum class StepRule { Fixed, Backtracking };
  StepRule step_rule = StepRule::Backtracking;
  double fixed_step = 0.05;
  std::uint64_t seed = 0;
  // 1 = one homogeneous transition matrix; 3 = depth-bucketed extension.
  int transition_buckets = 1;
  // OpenMP over instances. Per-instance results are reduced in fixed
  // instance order, so this never changes the bits of the result.
  bool parallel = true;
};

// Node weights, shared transition matrices and bias over the fixed label
// order. MaxEnt is the special case with zero transitions and edges ignored.
class CrfModel {
 public:
  CrfModel() = default;
  CrfModel(FeatureLayout layout, TrainMode mode, double lambda,
           int transition_buckets = 1);

  int feature_width() const { return feature_width_; }
  TrainMode mode() const { return mode_; }
  double lambda() const { return lambda_; }
  int transition_buckets() const { return transition_buckets_; }
  const FeatureLayout& feature_layout() const { return layout_; }

  double node_weight(int y, int f) const { return node_weights_[y * feature_width_ + f]; }
  double transition(int bucket, int yp, int yc) const {
    return transition_[bucket * 16 + yp * kNumLabels + yc];
  }
  double bias(int y) const { return bias_[y]; }

  std::span<const double> node_weights() const { return node_weights_; }
  std::span<const double> transitions() const { return transition_; }
  std::span<const double> biases() const { return bias_; }

  // Flat parameter order: node_weights row-major, then the transition
  // matrices bucket by bucket, then bias. The trainer and the
  // finite-difference tests share this packing.
  std::size_t parameter_count() const {
    return node_weights_.size() + transition_.size() + 4;
  }
  std::vector<double> pack() const;
  void unpack(std::span<const double> params);

  std::string to_json() const;
  static CrfModel from_json(const std::string& text);

 private:
  FeatureLayout layout_;
  TrainMode mode_ = TrainMode::TreeCrf;
  double lambda_ = 1.0;
  int feature_width_ = 0;
  int transition_buckets_ = 1;
  std::vector<double> node_weights_;  // 4 x F
  std::vector<double> transition_;    // buckets x 16
  std::array<double, 4> bias_{};
};

// theta_i(y) = node_weights[y] . x_i + bias[y]; edge matrix from the model
// (identically zero in MaxEnt mode). Throws DimensionMismatch.
Potentials compute_potentials(const CrfModel& model, const CrfInstance& instance,
                              TrainMode mode);

// Exact two-pass sum-product in the log domain. Works on any rooted tree;
// chains are a special case.
InferenceResult sum_product(const Potentials& potentials);

// Chain-specialized sum-product, kept as an independent reference path;
// bit-identical to sum_product on path-shaped instances.
InferenceResult chain_sum_product(const Potentials& potentials);

// Exact MAP with back-pointers; argmax ties resolved toward the lowest
// label in the fixed order.
MapResult max_product(const Potentials& potentials);
MapResult chain_max_product(const Potentials& potentials);

// Conditional log-probability of the gold labeling.
double log_likelihood(const CrfModel& model, const CrfInstance& instance,
                      TrainMode mode);

// Per-instance sufficient statistics for one objective/gradient evaluation.
struct BatchStats {
  std::vector<double> log_likelihoods;
  std::vector<InferenceResult> inference;
};

// Inference over all instances. `parallel` switches between the serial
// reference loop and the OpenMP kernel; both fill identical slots.
BatchStats compute_batch_stats(const CrfModel& model,
                               std::span<const CrfInstance> instances,
                               TrainMode mode, bool parallel);

// lambda-regularized conditional log-likelihood and its gradient in flat
// parameter packing. Gradient accumulation runs in fixed instance order.
double objective_value(const CrfModel& model,
                       std::span<const CrfInstance> instances, TrainMode mode,
                       bool parallel);
std::vector<double> gradient(const CrfModel& model,
                             std::span<const CrfInstance> instances,
                             TrainMode mode, bool parallel);

// Full-batch gradient ascent from zero weights with backtracking line
// search; deterministic under a fixed config.
CrfModel train(std::span<const CrfInstance> instances,
               const TrainConfig& config, TrainMode mode);
// Same but starting from an explicit initial model.
CrfModel train_from(CrfModel model, std::span<const CrfInstance> instances,
                    const TrainConfig& config, TrainMode mode);

// Tree/Linear modes decode with max-product; MaxEnt takes the per-node
// argmax of the node potentials.
std::vector<StanceLabel> predict(const CrfModel& model,
                                 const CrfInstance& instance, TrainMode mode);

// Majority vote per tweet over per-branch predictions, ties resolved by the
// fixed label order. `disagreements` counts tweets whose branch predictions
// were not unanimous.
struct AggregatedPredictions {
  std::map<std::string, StanceLabel> labels;
  int disagreements = 0;
};
AggregatedPredictions aggregate_branch_predictions(
    const std::vector<std::pair<Branch, std::vector<StanceLabel>>>&
        branch_predictions);

}  // namespace sdqc
