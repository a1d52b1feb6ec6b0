#include "sdqc/crf.hpp"

#include <algorithm>
#include <cmath>

#include "sdqc/error.hpp"
#include "sdqc/logmath.hpp"

namespace sdqc {

namespace {
constexpr int P = kNumLabels;
}  // namespace

InstanceShape InstanceShape::chain(std::size_t n) {
  InstanceShape shape;
  shape.parent.resize(n);
  shape.children.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    shape.parent[i] = static_cast<int>(i) - 1;
    if (i + 1 < n) shape.children[i].push_back(static_cast<int>(i) + 1);
  }
  return shape;
}

InstanceShape InstanceShape::from_tree(const ConversationTree& tree) {
  std::vector<int> parent(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) parent[i] = tree.parent_index(i);
  return from_parents(std::move(parent));
}

InstanceShape InstanceShape::from_parents(std::vector<int> parent) {
  InstanceShape shape;
  shape.parent = std::move(parent);
  shape.children.resize(shape.parent.size());
  for (std::size_t i = 1; i < shape.parent.size(); ++i) {
    int p = shape.parent[i];
    if (p >= 0 && static_cast<std::size_t>(p) < i)
      shape.children[p].push_back(static_cast<int>(i));
  }
  shape.validate();
  return shape;
}

bool InstanceShape::is_chain() const {
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] != static_cast<int>(i) - 1) return false;
  return true;
}

void InstanceShape::validate() const {
  if (parent.empty()) throw Error(ErrorCode::NotATree, "instance has no nodes");
  if (parent[0] != -1)
    throw Error(ErrorCode::NotATree, "node 0 must be the root");
  for (std::size_t i = 1; i < parent.size(); ++i) {
    if (parent[i] < 0 || static_cast<std::size_t>(parent[i]) >= i)
      throw Error(ErrorCode::NotATree,
                  "node " + std::to_string(i) + " has no earlier parent");
  }
  if (children.size() != parent.size())
    throw Error(ErrorCode::NotATree, "children index out of sync");
}

int depth_transition_bucket(int child_depth) {
  if (child_depth <= 1) return 0;
  if (child_depth == 2) return 1;
  return 2;
}

Potentials compute_potentials(const CrfModel& model, const CrfInstance& instance,
                              TrainMode mode) {
  const std::size_t n = instance.size();
  if (instance.features.size() != n ||
      (!instance.edge_bucket.empty() && instance.edge_bucket.size() != n))
    throw Error(ErrorCode::LengthMismatch,
                "feature rows do not match instance nodes");
  const int width = model.feature_width();
  Potentials pot;
  pot.shape = &instance.shape;
  pot.node_log.resize(n * P);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = instance.features[i];
    if (static_cast<int>(x.size()) != width)
      throw Error(ErrorCode::DimensionMismatch,
                  "feature width " + std::to_string(x.size()) +
                      " does not match model width " + std::to_string(width));
    for (int y = 0; y < P; ++y) {
      double dot = 0.0;
      const double* w = model.node_weights().data() + static_cast<std::size_t>(y) * width;
      for (int f = 0; f < width; ++f) dot += w[f] * x[f];
      pot.node_log[i * P + y] = dot + model.bias(y);
    }
  }
  pot.edge_log.assign(static_cast<std::size_t>(model.transition_buckets()), {});
  if (mode != TrainMode::MaxEnt) {
    for (int b = 0; b < model.transition_buckets(); ++b)
      for (int k = 0; k < 16; ++k)
        pot.edge_log[b][k] = model.transitions()[b * 16 + k];
  }
  pot.edge_bucket.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = instance.bucket_of(i);
    if (b < 0 || b >= model.transition_buckets())
      throw Error(ErrorCode::DimensionMismatch,
                  "edge bucket out of range for this model");
    pot.edge_bucket[i] = b;
  }
  return pot;
}

InferenceResult sum_product(const Potentials& pot) {
  const InstanceShape& shape = *pot.shape;
  shape.validate();
  const std::size_t n = shape.size();

  // Upward pass: fold each node's message into its parent, leaves first.
  std::vector<double> belief_up(pot.node_log);
  std::vector<double> up_msg(n * P, 0.0);
  std::array<double, P> buf;
  for (std::size_t i = n; i-- > 1;) {
    const double* E = pot.edge_matrix(i);
    for (int yp = 0; yp < P; ++yp) {
      for (int yc = 0; yc < P; ++yc)
        buf[yc] = belief_up[i * P + yc] + E[yp * P + yc];
      up_msg[i * P + yp] = log_sum_exp(buf);
    }
    const std::size_t p = static_cast<std::size_t>(shape.parent[i]);
    for (int y = 0; y < P; ++y) belief_up[p * P + y] += up_msg[i * P + y];
  }

  InferenceResult result;
  {
    std::array<double, P> root;
    for (int y = 0; y < P; ++y) root[y] = belief_up[y];
    result.log_partition = log_sum_exp(root);
  }

  // Downward pass: parents are ready before their children by node order.
  std::vector<double> down(n * P, 0.0);
  result.node_marginals.assign(n * P, 0.0);
  result.edge_marginals.assign(n * 16, 0.0);
  std::array<double, 16> ebuf;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = static_cast<std::size_t>(shape.parent[i]);
    const double* E = pot.edge_matrix(i);
    std::array<double, P> pre;
    for (int yp = 0; yp < P; ++yp)
      pre[yp] = belief_up[p * P + yp] + down[p * P + yp] - up_msg[i * P + yp];
    for (int yc = 0; yc < P; ++yc) {
      for (int yp = 0; yp < P; ++yp) buf[yp] = pre[yp] + E[yp * P + yc];
      down[i * P + yc] = log_sum_exp(buf);
    }
    for (int yp = 0; yp < P; ++yp)
      for (int yc = 0; yc < P; ++yc)
        ebuf[yp * P + yc] = pre[yp] + E[yp * P + yc] + belief_up[i * P + yc];
    const double norm = log_sum_exp(ebuf);
    for (int k = 0; k < 16; ++k)
      result.edge_marginals[i * 16 + k] = std::exp(ebuf[k] - norm);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, P> total;
    for (int y = 0; y < P; ++y) total[y] = belief_up[i * P + y] + down[i * P + y];
    const double norm = log_sum_exp(total);
    for (int y = 0; y < P; ++y)
      result.node_marginals[i * P + y] = std::exp(total[y] - norm);
  }
  return result;
}

InferenceResult chain_sum_product(const Potentials& pot) {
  const InstanceShape& shape = *pot.shape;
  shape.validate();
  if (!shape.is_chain())
    throw Error(ErrorCode::NotATree, "chain inference on a non-chain shape");
  const std::size_t n = shape.size();

  // Backward recursion; beta[i] plays the role of the upward belief.
  std::vector<double> beta(pot.node_log);
  std::vector<double> msg(n * P, 0.0);
  std::array<double, P> buf;
  for (std::size_t i = n; i-- > 1;) {
    const double* E = pot.edge_matrix(i);
    for (int yp = 0; yp < P; ++yp) {
      for (int yc = 0; yc < P; ++yc)
        buf[yc] = beta[i * P + yc] + E[yp * P + yc];
      msg[i * P + yp] = log_sum_exp(buf);
    }
    for (int y = 0; y < P; ++y) beta[(i - 1) * P + y] += msg[i * P + y];
  }

  InferenceResult result;
  {
    std::array<double, P> head;
    for (int y = 0; y < P; ++y) head[y] = beta[y];
    result.log_partition = log_sum_exp(head);
  }

  std::vector<double> fwd(n * P, 0.0);
  result.node_marginals.assign(n * P, 0.0);
  result.edge_marginals.assign(n * 16, 0.0);
  std::array<double, 16> ebuf;
  for (std::size_t i = 1; i < n; ++i) {
    const double* E = pot.edge_matrix(i);
    std::array<double, P> pre;
    for (int yp = 0; yp < P; ++yp)
      pre[yp] = beta[(i - 1) * P + yp] + fwd[(i - 1) * P + yp] - msg[i * P + yp];
    for (int yc = 0; yc < P; ++yc) {
      for (int yp = 0; yp < P; ++yp) buf[yp] = pre[yp] + E[yp * P + yc];
      fwd[i * P + yc] = log_sum_exp(buf);
    }
    for (int yp = 0; yp < P; ++yp)
      for (int yc = 0; yc < P; ++yc)
        ebuf[yp * P + yc] = pre[yp] + E[yp * P + yc] + beta[i * P + yc];
    const double norm = log_sum_exp(ebuf);
    for (int k = 0; k < 16; ++k)
      result.edge_marginals[i * 16 + k] = std::exp(ebuf[k] - norm);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, P> total;
    for (int y = 0; y < P; ++y) total[y] = beta[i * P + y] + fwd[i * P + y];
    const double norm = log_sum_exp(total);
    for (int y = 0; y < P; ++y)
      result.node_marginals[i * P + y] = std::exp(total[y] - norm);
  }
  return result;
}

namespace {

// First maximum wins, so ties resolve toward the lowest label in the
// fixed order.
int argmax4(const std::array<double, P>& v) {
  int best = 0;
  for (int y = 1; y < P; ++y)
    if (v[y] > v[best]) best = y;
  return best;
}

}  // namespace

MapResult max_product(const Potentials& pot) {
  const InstanceShape& shape = *pot.shape;
  shape.validate();
  const std::size_t n = shape.size();

  std::vector<double> best(pot.node_log);
  std::vector<int> back(n * P, 0);
  std::array<double, P> buf;
  for (std::size_t i = n; i-- > 1;) {
    const double* E = pot.edge_matrix(i);
    for (int yp = 0; yp < P; ++yp) {
      for (int yc = 0; yc < P; ++yc)
        buf[yc] = best[i * P + yc] + E[yp * P + yc];
      const int arg = argmax4(buf);
      back[i * P + yp] = arg;
      const std::size_t p = static_cast<std::size_t>(shape.parent[i]);
      best[p * P + yp] += buf[arg];
    }
  }

  MapResult result;
  result.labels.resize(n);
  std::array<double, P> root;
  for (int y = 0; y < P; ++y) root[y] = best[y];
  const int y0 = argmax4(root);
  result.score = root[y0];
  result.labels[0] = kLabelOrder[y0];
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = static_cast<std::size_t>(shape.parent[i]);
    const int yp = label_index(result.labels[p]);
    result.labels[i] = kLabelOrder[back[i * P + yp]];
  }
  return result;
}

MapResult chain_max_product(const Potentials& pot) {
  const InstanceShape& shape = *pot.shape;
  shape.validate();
  if (!shape.is_chain())
    throw Error(ErrorCode::NotATree, "chain decoding on a non-chain shape");
  const std::size_t n = shape.size();

  std::vector<double> best(pot.node_log);
  std::vector<int> back(n * P, 0);
  std::array<double, P> buf;
  for (std::size_t i = n; i-- > 1;) {
    const double* E = pot.edge_matrix(i);
    for (int yp = 0; yp < P; ++yp) {
      for (int yc = 0; yc < P; ++yc)
        buf[yc] = best[i * P + yc] + E[yp * P + yc];
      const int arg = argmax4(buf);
      back[i * P + yp] = arg;
      best[(i - 1) * P + yp] += buf[arg];
    }
  }

  MapResult result;
  result.labels.resize(n);
  std::array<double, P> head;
  for (int y = 0; y < P; ++y) head[y] = best[y];
  const int y0 = argmax4(head);
  result.score = head[y0];
  result.labels[0] = kLabelOrder[y0];
  for (std::size_t i = 1; i < n; ++i) {
    const int yp = label_index(result.labels[i - 1]);
    result.labels[i] = kLabelOrder[back[i * P + yp]];
  }
  return result;
}

}  // namespace sdqc
