#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdqc/conversation.hpp"
#include "sdqc/labels.hpp"

namespace sdqc {

// Rows are gold labels, columns predictions, both in the fixed order.
class ConfusionMatrix {
 public:
  void add(StanceLabel gold, StanceLabel pred, long long count = 1);
  long long at(StanceLabel gold, StanceLabel pred) const;
  long long at(int gold, int pred) const { return counts_[gold * kNumLabels + pred]; }

  long long total() const;
  long long trace() const;
  long long gold_count(int y) const;       // row sum
  long long predicted_count(int y) const;  // column sum

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  bool operator==(const ConfusionMatrix& other) const = default;

 private:
  std::array<long long, kNumLabels * kNumLabels> counts_{};
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct DepthBucketScore {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  long long support = 0;
};

// Depth buckets 0..9 hold exact depths; bucket 10 pools everything deeper.
constexpr int kDepthBucketCap = 10;
int depth_bucket(int depth);
std::string depth_bucket_name(int bucket);

struct EvalReport {
  ConfusionMatrix confusion;
  std::array<ClassMetrics, kNumLabels> per_class{};
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::map<int, DepthBucketScore> per_depth;  // only non-empty buckets
  std::optional<std::string> fold_id;
};

// Throws LengthMismatch on ragged inputs.
ConfusionMatrix confusion(std::span<const StanceLabel> gold,
                          std::span<const StanceLabel> pred);

// Standard precision/recall/F1 with the 0/0 -> 0 convention.
std::array<ClassMetrics, kNumLabels> per_class_f1(const ConfusionMatrix& cm);

// micro-F1 equals accuracy for single-label multiclass; macro-F1 is the
// unweighted mean over the 4 classes. Throws EmptyMatrix on zero totals.
std::pair<double, double> micro_macro(const ConfusionMatrix& cm);

std::map<int, DepthBucketScore> per_depth_breakdown(
    std::span<const StanceLabel> gold, std::span<const StanceLabel> pred,
    std::span<const int> depths);

// Full report over aligned gold/pred/depth triples.
EvalReport build_report(std::span<const StanceLabel> gold,
                        std::span<const StanceLabel> pred,
                        std::span<const int> depths,
                        std::optional<std::string> fold_id = std::nullopt);

// One scored tweet; folds return these in deterministic dataset order.
struct ScoredTweet {
  std::string tweet_id;
  StanceLabel gold;
  StanceLabel predicted;
  int depth = 0;
};

struct LoeoResult {
  std::vector<EvalReport> fold_reports;        // sorted by event name
  EvalReport aggregate;                        // pooled over all folds
  std::vector<std::vector<ScoredTweet>> fold_tweets;
};

// Trains on everything except `test` and returns one prediction per tweet
// of the test event, aligned with tree order (conversations in dataset
// order, nodes in preorder).
using FoldRunner = std::function<std::vector<StanceLabel>(
    const RumourDataset& train, const Event& test)>;

// Leave-one-event-out protocol: one fold per event, folds ordered by event
// name; the aggregate report pools all per-tweet predictions into a single
// confusion matrix before computing metrics. Gold labels are required on
// every tweet. Errors from a fold are rethrown with the event named.
LoeoResult leave_one_event_out(const RumourDataset& dataset,
                               const FoldRunner& runner);

}  // namespace sdqc
