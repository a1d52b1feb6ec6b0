#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdqc/labels.hpp"

namespace sdqc {

struct Tweet {
  std::string id;
  std::string text;
  std::optional<std::string> parent_id;  // absent <=> source tweet
  std::string event;
  std::optional<RawAnnotation> raw_annotation;
  std::optional<StanceLabel> gold_label;
  std::optional<bool> has_picture_metadata;

  bool is_source() const { return !parent_id.has_value(); }
};

// A rooted reply tree. Nodes are stored in depth-first preorder with siblings
// sorted ascending by tweet id, which makes branch extraction and every
// downstream report deterministic. node(0) is always the root.
class ConversationTree {
 public:
  // Links each tweet to its parent and validates the tree invariants.
  // Throws NoRoot, MultipleRoots, OrphanReply or CycleDetected.
  static ConversationTree build(std::vector<Tweet> tweets);

  std::size_t size() const { return nodes_.size(); }
  const Tweet& node(std::size_t index) const { return nodes_[index]; }
  const Tweet& root() const { return nodes_[0]; }

  // Index of a node's parent; -1 for the root.
  int parent_index(std::size_t index) const { return parents_[index]; }
  const std::vector<std::size_t>& child_indices(std::size_t index) const {
    return children_[index];
  }

  // Throws UnknownId if the id is not in this tree.
  std::size_t index_of(const std::string& id) const;
  bool contains(const std::string& id) const;

  // Number of reply edges from the root down to the tweet.
  int depth_of_index(std::size_t index) const { return depths_[index]; }
  int depth_of(const std::string& id) const;

  // Ingestion hook: fills in a label resolved from raw annotations.
  void set_gold_label(std::size_t index, std::optional<StanceLabel> label) {
    nodes_[index].gold_label = label;
  }

 private:
  std::vector<Tweet> nodes_;                     // preorder
  std::vector<int> parents_;                     // parallel to nodes_
  std::vector<std::vector<std::size_t>> children_;
  std::vector<int> depths_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Root-to-leaf path, stored as node indices into the owning tree plus the
// tweet ids along the path.
struct Branch {
  std::vector<std::size_t> node_indices;
  std::vector<std::string> path;  // tweet ids, path[0] is the root
};

// One Branch per leaf, in depth-first order. Shared prefixes are repeated
// across branches; a single-node tree yields one branch of length 1.
std::vector<Branch> extract_branches(const ConversationTree& tree);

struct Event {
  std::string name;
  std::vector<ConversationTree> conversations;
};

// A rumour dataset: events ordered by name, each holding its conversation
// trees. Every tweet's event field matches its containing event.
struct RumourDataset {
  std::vector<Event> events;

  std::size_t tweet_count() const;
  const Event* find_event(const std::string& name) const;
};

}  // namespace sdqc
