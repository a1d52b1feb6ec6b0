#include "sdqc/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "sdqc/error.hpp"
#include "sdqc/rng.hpp"

namespace sdqc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

void validate(const SyntheticSpec& spec) {
  require(spec.events >= 1, "events must be >= 1");
  require(spec.trees_per_event >= 1, "trees_per_event must be >= 1");
  require(spec.max_depth >= 0, "max_depth must be >= 0");
  require(spec.max_children >= 0, "max_children must be >= 0");
  require(spec.shared_vocab >= 1 && spec.label_vocab >= 1,
          "vocabulary sizes must be >= 1");
  require(spec.min_tokens >= 1 && spec.max_tokens >= spec.min_tokens,
          "token range must satisfy 1 <= min <= max");
  for (double p : {spec.branch_prob, spec.signal_prob, spec.question_prob,
                   spec.negation_prob, spec.picture_prob, spec.url_prob})
    require(p >= 0.0 && p <= 1.0, "probabilities must lie in [0,1]");
  double root_sum = 0.0;
  for (double p : spec.root_probs) {
    require(p >= 0.0, "root_probs must be non-negative");
    root_sum += p;
  }
  require(std::abs(root_sum - 1.0) <= 1e-9, "root_probs must sum to 1");
  for (const auto& row : spec.transitions) {
    double sum = 0.0;
    for (double p : row) {
      require(p >= 0.0, "transition entries must be non-negative");
      sum += p;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "transition rows must sum to 1");
  }
}

int sample_categorical(Rng& rng, const std::array<double, kNumLabels>& probs) {
  const double u = rng.next_double();
  double cum = 0.0;
  for (int k = 0; k < kNumLabels; ++k) {
    cum += probs[k];
    if (u < cum) return k;
  }
  return kNumLabels - 1;
}

constexpr const char* kLabelPrefix[kNumLabels] = {"sup", "den", "que", "com"};
constexpr const char* kNegationWords[] = {"not", "no", "never", "don't",
                                          "isn't"};

std::string make_text(Rng& rng, const SyntheticSpec& spec, StanceLabel label,
                      const std::string& parent_id, bool is_source,
                      bool* wants_picture) {
  const int y = label_index(label);
  const int count =
      spec.min_tokens +
      static_cast<int>(rng.next_below(
          static_cast<std::uint64_t>(spec.max_tokens - spec.min_tokens + 1)));
  std::vector<std::string> tokens;
  if (!is_source) tokens.push_back("@" + parent_id);
  for (int t = 0; t < count; ++t) {
    if (rng.next_double() < spec.signal_prob) {
      const auto k = rng.next_below(static_cast<std::uint64_t>(spec.label_vocab));
      tokens.push_back(std::string(kLabelPrefix[y]) + "word" +
                       std::to_string(k));
    } else {
      const auto k = rng.next_below(static_cast<std::uint64_t>(spec.shared_vocab));
      tokens.push_back("topic" + std::to_string(k));
    }
  }
  if (label == StanceLabel::Denying && rng.next_double() < spec.negation_prob) {
    const auto k = rng.next_below(std::size(kNegationWords));
    const auto pos = rng.next_below(tokens.size() + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                  kNegationWords[k]);
  }
  if (label == StanceLabel::Supporting) {
    if (rng.next_double() < spec.url_prob)
      tokens.push_back("https://t.co/ev" +
                       std::to_string(rng.next_below(10000)));
    *wants_picture = is_source && rng.next_double() < spec.picture_prob;
  }
  if (label == StanceLabel::Querying && rng.next_double() < spec.question_prob)
    tokens.push_back("right?");
  if (label == StanceLabel::Commenting && rng.next_double() < 0.4)
    tokens.push_back("fwiw.");
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) text += ' ';
    text += tokens[i];
  }
  return text;
}

struct TreeBuilder {
  const SyntheticSpec& spec;
  Rng& rng;
  const std::string& event_name;
  std::uint64_t& id_counter;
  std::vector<Tweet> tweets;

  std::string next_id() {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%07llu",
                  static_cast<unsigned long long>(id_counter++));
    return std::string(buf);
  }

  void grow(const std::string& parent_id, StanceLabel parent_label, int depth) {
    if (depth >= spec.max_depth) return;
    const double damped = spec.branch_prob / (1.0 + 0.5 * depth);
    for (int slot = 0; slot < spec.max_children; ++slot) {
      if (rng.next_double() >= damped) continue;
      const StanceLabel label = kLabelOrder[sample_categorical(
          rng, spec.transitions[label_index(parent_label)])];
      Tweet tweet;
      tweet.id = next_id();
      tweet.parent_id = parent_id;
      tweet.event = event_name;
      tweet.gold_label = label;
      bool picture = false;
      tweet.text = make_text(rng, spec, label, parent_id, false, &picture);
      if (picture) tweet.has_picture_metadata = true;
      tweets.push_back(tweet);
      grow(tweet.id, label, depth + 1);
    }
  }

  std::vector<Tweet> build() {
    const StanceLabel label = kLabelOrder[sample_categorical(rng, spec.root_probs)];
    Tweet root;
    root.id = next_id();
    root.event = event_name;
    root.gold_label = label;
    bool picture = false;
    root.text = make_text(rng, spec, label, "", true, &picture);
    if (picture) root.has_picture_metadata = true;
    tweets.push_back(root);
    grow(root.id, label, 0);
    return std::move(tweets);
  }
};

}  // namespace

RumourDataset generate_synthetic(const SyntheticSpec& spec) {
  validate(spec);
  RumourDataset dataset;
  std::uint64_t id_counter = 0;
  for (int e = 0; e < spec.events; ++e) {
    char name[24];
    std::snprintf(name, sizeof(name), "event-%02d", e);
    Event event;
    event.name = name;
    Rng rng(derive_seed(spec.seed, std::string("synth-") + name));
    for (int t = 0; t < spec.trees_per_event; ++t) {
      TreeBuilder builder{spec, rng, event.name, id_counter, {}};
      event.conversations.push_back(ConversationTree::build(builder.build()));
    }
    dataset.events.push_back(std::move(event));
  }
  return dataset;
}

}  // namespace sdqc
