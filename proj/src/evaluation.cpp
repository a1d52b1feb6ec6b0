#include "sdqc/evaluation.hpp"

#include <algorithm>

#include "sdqc/error.hpp"

namespace sdqc {

namespace {
constexpr int P = kNumLabels;
}  // namespace

void ConfusionMatrix::add(StanceLabel gold, StanceLabel pred, long long count) {
  counts_[label_index(gold) * P + label_index(pred)] += count;
}

long long ConfusionMatrix::at(StanceLabel gold, StanceLabel pred) const {
  return counts_[label_index(gold) * P + label_index(pred)];
}

long long ConfusionMatrix::total() const {
  long long sum = 0;
  for (long long c : counts_) sum += c;
  return sum;
}

long long ConfusionMatrix::trace() const {
  long long sum = 0;
  for (int y = 0; y < P; ++y) sum += counts_[y * P + y];
  return sum;
}

long long ConfusionMatrix::gold_count(int y) const {
  long long sum = 0;
  for (int p = 0; p < P; ++p) sum += counts_[y * P + p];
  return sum;
}

long long ConfusionMatrix::predicted_count(int y) const {
  long long sum = 0;
  for (int g = 0; g < P; ++g) sum += counts_[g * P + y];
  return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t k = 0; k < counts_.size(); ++k) counts_[k] += other.counts_[k];
  return *this;
}

ConfusionMatrix confusion(std::span<const StanceLabel> gold,
                          std::span<const StanceLabel> pred) {
  if (gold.size() != pred.size())
    throw Error(ErrorCode::LengthMismatch,
                "gold and predicted label counts differ");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) cm.add(gold[i], pred[i]);
  return cm;
}

std::array<ClassMetrics, kNumLabels> per_class_f1(const ConfusionMatrix& cm) {
  std::array<ClassMetrics, kNumLabels> out{};
  for (int y = 0; y < P; ++y) {
    const double tp = static_cast<double>(cm.at(y, y));
    const double gold = static_cast<double>(cm.gold_count(y));
    const double pred = static_cast<double>(cm.predicted_count(y));
    ClassMetrics& m = out[y];
    m.precision = pred > 0 ? tp / pred : 0.0;
    m.recall = gold > 0 ? tp / gold : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
  }
  return out;
}

std::pair<double, double> micro_macro(const ConfusionMatrix& cm) {
  const long long total = cm.total();
  if (total == 0) throw Error(ErrorCode::EmptyMatrix, "no scored tweets");
  const double micro = static_cast<double>(cm.trace()) / static_cast<double>(total);
  const auto per_class = per_class_f1(cm);
  double macro = 0.0;
  for (const ClassMetrics& m : per_class) macro += m.f1;
  macro /= P;
  return {micro, macro};
}

int depth_bucket(int depth) { return std::min(depth, kDepthBucketCap); }

std::string depth_bucket_name(int bucket) {
  return bucket >= kDepthBucketCap ? "10+" : std::to_string(bucket);
}

std::map<int, DepthBucketScore> per_depth_breakdown(
    std::span<const StanceLabel> gold, std::span<const StanceLabel> pred,
    std::span<const int> depths) {
  if (gold.size() != pred.size() || gold.size() != depths.size())
    throw Error(ErrorCode::LengthMismatch,
                "gold, predictions and depths must align");
  std::map<int, ConfusionMatrix> buckets;
  for (std::size_t i = 0; i < gold.size(); ++i)
    buckets[depth_bucket(depths[i])].add(gold[i], pred[i]);
  std::map<int, DepthBucketScore> out;
  for (const auto& [bucket, cm] : buckets) {
    const auto [micro, macro] = micro_macro(cm);
    out.emplace(bucket, DepthBucketScore{micro, macro, cm.total()});
  }
  return out;
}

EvalReport build_report(std::span<const StanceLabel> gold,
                        std::span<const StanceLabel> pred,
                        std::span<const int> depths,
                        std::optional<std::string> fold_id) {
  EvalReport report;
  report.confusion = confusion(gold, pred);
  report.per_class = per_class_f1(report.confusion);
  const auto [micro, macro] = micro_macro(report.confusion);
  report.micro_f1 = micro;
  report.macro_f1 = macro;
  report.per_depth = per_depth_breakdown(gold, pred, depths);
  report.fold_id = std::move(fold_id);
  return report;
}

LoeoResult leave_one_event_out(const RumourDataset& dataset,
                               const FoldRunner& runner) {
  if (dataset.events.size() < 2)
    throw Error(ErrorCode::InvalidSpec,
                "leave-one-event-out needs at least two events");

  std::vector<std::size_t> order(dataset.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.events[a].name < dataset.events[b].name;
  });

  LoeoResult result;
  std::vector<StanceLabel> all_gold, all_pred;
  std::vector<int> all_depths;
  for (std::size_t idx : order) {
    const Event& test = dataset.events[idx];
    RumourDataset train;
    for (std::size_t j = 0; j < dataset.events.size(); ++j)
      if (j != idx) train.events.push_back(dataset.events[j]);

    std::vector<StanceLabel> pred;
    try {
      pred = runner(train, test);
    } catch (const Error& e) {
      throw Error(e.code(), "fold `" + test.name + "`: " + e.what());
    }

    std::vector<ScoredTweet> scored;
    std::vector<StanceLabel> gold;
    std::vector<int> depths;
    for (const ConversationTree& tree : test.conversations)
      for (std::size_t i = 0; i < tree.size(); ++i) {
        const Tweet& tweet = tree.node(i);
        if (!tweet.gold_label)
          throw Error(ErrorCode::MissingGoldLabel,
                      "fold `" + test.name + "`: tweet " + tweet.id +
                          " has no gold label");
        gold.push_back(*tweet.gold_label);
        depths.push_back(tree.depth_of_index(i));
        scored.push_back(ScoredTweet{tweet.id, *tweet.gold_label,
                                     StanceLabel::Supporting, tree.depth_of_index(i)});
      }
    if (pred.size() != gold.size())
      throw Error(ErrorCode::LengthMismatch,
                  "fold `" + test.name + "`: runner returned " +
                      std::to_string(pred.size()) + " predictions for " +
                      std::to_string(gold.size()) + " tweets");
    for (std::size_t i = 0; i < scored.size(); ++i)
      scored[i].predicted = pred[i];

    result.fold_reports.push_back(build_report(gold, pred, depths, test.name));
    result.fold_tweets.push_back(std::move(scored));
    all_gold.insert(all_gold.end(), gold.begin(), gold.end());
    all_pred.insert(all_pred.end(), pred.begin(), pred.end());
    all_depths.insert(all_depths.end(), depths.begin(), depths.end());
  }
  result.aggregate = build_report(all_gold, all_pred, all_depths);
  return result;
}

}  // namespace sdqc
