#include "sdqc/conversation.hpp"

#include <algorithm>

#include "sdqc/error.hpp"

namespace sdqc {

ConversationTree ConversationTree::build(std::vector<Tweet> tweets) {
  if (tweets.empty()) {
    throw Error(ErrorCode::NoRoot, "empty tweet list");
  }

  std::unordered_map<std::string, std::size_t> by_id;
  by_id.reserve(tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    const Tweet& t = tweets[i];
    if (t.id.empty()) {
      throw Error(ErrorCode::SchemaViolation, "tweet with empty id");
    }
    if (t.parent_id && *t.parent_id == t.id) {
      throw Error(ErrorCode::CycleDetected, "tweet " + t.id + " replies to itself");
    }
    if (!by_id.emplace(t.id, i).second) {
      throw Error(ErrorCode::SchemaViolation, "duplicate tweet id " + t.id);
    }
  }

  std::size_t root_pos = tweets.size();
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!tweets[i].parent_id) {
      if (root_pos != tweets.size()) {
        throw Error(ErrorCode::MultipleRoots,
                    tweets[root_pos].id + " and " + tweets[i].id);
      }
      root_pos = i;
    }
  }
  if (root_pos == tweets.size()) {
    throw Error(ErrorCode::NoRoot, "no tweet without parent_id");
  }

  // Children per input position, sorted ascending by id (the sibling
  // tie-break rule).
  std::vector<std::vector<std::size_t>> kids(tweets.size());
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!tweets[i].parent_id) continue;
    auto it = by_id.find(*tweets[i].parent_id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::OrphanReply, "tweet " + tweets[i].id +
                                              " replies to unknown id " +
                                              *tweets[i].parent_id);
    }
    kids[it->second].push_back(i);
  }
  for (auto& c : kids) {
    std::sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) {
      return tweets[a].id < tweets[b].id;
    });
  }

  ConversationTree tree;
  tree.nodes_.reserve(tweets.size());
  tree.parents_.reserve(tweets.size());
  tree.depths_.reserve(tweets.size());
  tree.children_.resize(tweets.size());

  // Iterative preorder walk; children pushed in reverse so they pop in
  // ascending-id order.
  std::vector<std::pair<std::size_t, int>> stack;  // (input pos, parent node)
  stack.emplace_back(root_pos, -1);
  while (!stack.empty()) {
    auto [pos, parent] = stack.back();
    stack.pop_back();
    std::size_t node = tree.nodes_.size();
    tree.parents_.push_back(parent);
    tree.depths_.push_back(parent < 0 ? 0 : tree.depths_[parent] + 1);
    if (parent >= 0) tree.children_[parent].push_back(node);
    tree.index_.emplace(tweets[pos].id, node);
    tree.nodes_.push_back(std::move(tweets[pos]));
    for (auto it = kids[pos].rbegin(); it != kids[pos].rend(); ++it) {
      stack.emplace_back(*it, static_cast<int>(node));
    }
  }

  if (tree.nodes_.size() != kids.size()) {
    // Some tweets were never reached from the root: their parent links form
    // a cycle among themselves.
    throw Error(ErrorCode::CycleDetected,
                std::to_string(kids.size() - tree.nodes_.size()) +
                    " tweet(s) unreachable from the root");
  }
  tree.children_.resize(tree.nodes_.size());
  return tree;
}

std::size_t ConversationTree::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownId, id);
  }
  return it->second;
}

bool ConversationTree::contains(const std::string& id) const {
  return index_.count(id) > 0;
}

int ConversationTree::depth_of(const std::string& id) const {
  return depths_[index_of(id)];
}

std::vector<Branch> extract_branches(const ConversationTree& tree) {
  std::vector<Branch> branches;
  std::vector<std::size_t> path;

  // Recursive DFS expressed with an explicit stack of (node, depth).
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  stack.emplace_back(0, 0);
  while (!stack.empty()) {
    auto [node, depth] = stack.back();
    stack.pop_back();
    path.resize(depth);
    path.push_back(node);
    const auto& kids = tree.child_indices(node);
    if (kids.empty()) {
      Branch b;
      b.node_indices = path;
      b.path.reserve(path.size());
      for (std::size_t idx : path) b.path.push_back(tree.node(idx).id);
      branches.push_back(std::move(b));
    } else {
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        stack.emplace_back(*it, depth + 1);
      }
    }
  }
  return branches;
}

std::size_t RumourDataset::tweet_count() const {
  std::size_t n = 0;
  for (const Event& e : events) {
    for (const ConversationTree& t : e.conversations) n += t.size();
  }
  return n;
}

const Event* RumourDataset::find_event(const std::string& name) const {
  for (const Event& e : events) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace sdqc
