// Confusion-based metrics, depth breakdowns and the leave-one-event-out
// protocol.
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "sdqc/conversation.hpp"
#include "sdqc/error.hpp"
#include "sdqc/evaluation.hpp"

using namespace sdqc;

namespace {

constexpr StanceLabel S = StanceLabel::Supporting;
constexpr StanceLabel D = StanceLabel::Denying;
constexpr StanceLabel Q = StanceLabel::Querying;
constexpr StanceLabel C = StanceLabel::Commenting;

Tweet labeled_tweet(const std::string& id, const std::string& event,
                    StanceLabel gold,
                    std::optional<std::string> parent = std::nullopt) {
  Tweet t;
  t.id = id;
  t.text = "text " + id;
  t.parent_id = std::move(parent);
  t.event = event;
  t.gold_label = gold;
  return t;
}

// Dataset with two events of single-tweet conversations carrying the given
// gold labels.
RumourDataset two_event_dataset(const std::vector<StanceLabel>& first,
                                const std::vector<StanceLabel>& second) {
  RumourDataset dataset;
  Event a, b;
  a.name = "alpha";
  b.name = "beta";
  int counter = 0;
  for (StanceLabel y : first)
    a.conversations.push_back(ConversationTree::build(
        {labeled_tweet("a" + std::to_string(counter++), "alpha", y)}));
  for (StanceLabel y : second)
    b.conversations.push_back(ConversationTree::build(
        {labeled_tweet("b" + std::to_string(counter++), "beta", y)}));
  dataset.events = {std::move(a), std::move(b)};
  return dataset;
}

}  // namespace

TEST_CASE("confusion matrix bookkeeping") {
  ConfusionMatrix cm;
  cm.add(S, S);
  cm.add(S, D);
  cm.add(D, D, 3);
  cm.add(C, C, 2);

  CHECK(cm.at(S, S) == 1);
  CHECK(cm.at(S, D) == 1);
  CHECK(cm.at(D, D) == 3);
  CHECK(cm.total() == 7);
  CHECK(cm.trace() == 6);
  CHECK(cm.gold_count(label_index(S)) == 2);
  CHECK(cm.predicted_count(label_index(D)) == 4);

  ConfusionMatrix other;
  other.add(S, S, 4);
  cm += other;
  CHECK(cm.at(S, S) == 5);
  CHECK(cm.total() == 11);

  const std::vector<StanceLabel> gold = {S, S, D, C};
  const std::vector<StanceLabel> pred = {S, D, D, C};
  const ConfusionMatrix built = confusion(gold, pred);
  CHECK(built.at(S, S) == 1);
  CHECK(built.at(S, D) == 1);
  CHECK(built.trace() == 3);

  try {
    confusion(gold, std::vector<StanceLabel>{S});
    FAIL("expected LengthMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("headline-distribution majority scores match the known arithmetic") {
  // Class totals 910 / 344 / 358 / 2907 with every prediction Commenting.
  ConfusionMatrix cm;
  cm.add(S, C, 910);
  cm.add(D, C, 344);
  cm.add(Q, C, 358);
  cm.add(C, C, 2907);

  const auto per_class = per_class_f1(cm);
  CHECK(per_class[label_index(S)].f1 == 0.0);
  CHECK(per_class[label_index(D)].f1 == 0.0);
  CHECK(per_class[label_index(Q)].f1 == 0.0);
  // F1(C) = 2*2907 / (2*2907 + (910+344+358)) = 5814/7426.
  CHECK(per_class[label_index(C)].f1 ==
        doctest::Approx(5814.0 / 7426.0).epsilon(1e-12));
  CHECK(per_class[label_index(C)].precision ==
        doctest::Approx(2907.0 / 4519.0));
  CHECK(per_class[label_index(C)].recall == 1.0);

  const auto [micro, macro] = micro_macro(cm);
  CHECK(micro == doctest::Approx(2907.0 / 4519.0).epsilon(1e-12));
  CHECK(macro == doctest::Approx(5814.0 / 7426.0 / 4.0).epsilon(1e-12));
  // Rounded to three places these are the familiar 0.643 / 0.196.
  CHECK(std::abs(micro - 0.643) < 5e-4);
  CHECK(std::abs(macro - 0.196) < 5e-4);
}

TEST_CASE("micro-F1 equals accuracy and macro is the unweighted mean") {
  const std::vector<StanceLabel> gold = {S, S, D, D, Q, C, C, C};
  const std::vector<StanceLabel> pred = {S, D, D, D, Q, C, C, S};
  const ConfusionMatrix cm = confusion(gold, pred);
  const auto [micro, macro] = micro_macro(cm);
  CHECK(micro == doctest::Approx(6.0 / 8.0));

  const auto per_class = per_class_f1(cm);
  double mean = 0.0;
  for (const ClassMetrics& m : per_class) mean += m.f1;
  CHECK(macro == doctest::Approx(mean / 4.0));

  try {
    micro_macro(ConfusionMatrix{});
    FAIL("expected EmptyMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyMatrix);
  }
}

TEST_CASE("per-class metrics use the 0/0 -> 0 convention") {
  ConfusionMatrix cm;
  cm.add(S, S, 5);  // only Supporting present, perfectly predicted
  const auto per_class = per_class_f1(cm);
  CHECK(per_class[label_index(S)].f1 == 1.0);
  for (int y = 1; y < kNumLabels; ++y) {
    CHECK(per_class[y].precision == 0.0);
    CHECK(per_class[y].recall == 0.0);
    CHECK(per_class[y].f1 == 0.0);
  }
}

TEST_CASE("depth buckets hold exact depths up to the 10+ pool") {
  CHECK(depth_bucket(0) == 0);
  CHECK(depth_bucket(9) == 9);
  CHECK(depth_bucket(10) == kDepthBucketCap);
  CHECK(depth_bucket(37) == kDepthBucketCap);
  CHECK(depth_bucket_name(0) == "0");
  CHECK(depth_bucket_name(9) == "9");
  CHECK(depth_bucket_name(kDepthBucketCap) == "10+");

  const std::vector<StanceLabel> gold = {S, D, Q, C, C};
  const std::vector<StanceLabel> pred = {S, D, Q, C, S};
  const std::vector<int> depths = {0, 1, 1, 12, 15};
  const auto buckets = per_depth_breakdown(gold, pred, depths);
  REQUIRE(buckets.size() == 3);
  CHECK(buckets.at(0).support == 1);
  CHECK(buckets.at(0).micro_f1 == 1.0);
  CHECK(buckets.at(1).support == 2);
  CHECK(buckets.at(1).micro_f1 == 1.0);
  CHECK(buckets.at(kDepthBucketCap).support == 2);
  CHECK(buckets.at(kDepthBucketCap).micro_f1 == doctest::Approx(0.5));
  CHECK(buckets.count(2) == 0);  // empty buckets omitted
}

TEST_CASE("build_report bundles metrics, depths and the fold id") {
  const std::vector<StanceLabel> gold = {S, D, C};
  const std::vector<StanceLabel> pred = {S, D, D};
  const std::vector<int> depths = {0, 1, 2};
  const EvalReport report = build_report(gold, pred, depths, "myfold");
  CHECK(report.fold_id == "myfold");
  CHECK(report.confusion.total() == 3);
  CHECK(report.micro_f1 == doctest::Approx(2.0 / 3.0));
  CHECK(report.per_depth.size() == 3);
  const EvalReport anon = build_report(gold, pred, depths);
  CHECK_FALSE(anon.fold_id.has_value());
}

TEST_CASE("leave-one-event-out echoes gold to a perfect score") {
  const RumourDataset dataset = two_event_dataset({S, D, Q}, {C, C});
  int calls = 0;
  const LoeoResult result = leave_one_event_out(
      dataset, [&](const RumourDataset& train, const Event& test) {
        ++calls;
        // Training data never contains the held-out event.
        for (const Event& e : train.events) CHECK(e.name != test.name);
        std::vector<StanceLabel> out;
        for (const ConversationTree& tree : test.conversations)
          for (std::size_t i = 0; i < tree.size(); ++i)
            out.push_back(*tree.node(i).gold_label);
        return out;
      });

  CHECK(calls == 2);
  REQUIRE(result.fold_reports.size() == 2);
  // Folds sorted by event name.
  CHECK(result.fold_reports[0].fold_id == "alpha");
  CHECK(result.fold_reports[1].fold_id == "beta");
  CHECK(result.fold_reports[0].confusion.total() == 3);
  CHECK(result.fold_reports[1].confusion.total() == 2);
  CHECK(result.aggregate.micro_f1 == 1.0);
  CHECK(result.aggregate.macro_f1 == 1.0);
  CHECK(result.aggregate.confusion.total() == 5);

  REQUIRE(result.fold_tweets.size() == 2);
  CHECK(result.fold_tweets[0].size() == 3);
  CHECK(result.fold_tweets[0][0].tweet_id == "a0");
  CHECK(result.fold_tweets[0][0].gold == S);
  CHECK(result.fold_tweets[0][0].predicted == S);
  CHECK(result.fold_tweets[0][0].depth == 0);
}

TEST_CASE("the aggregate pools confusions rather than averaging fold scores") {
  // Fold alpha: 1/3 correct. Fold beta: 2/2 correct. Pooled micro is 3/5,
  // not the 0.666... mean of the two fold micros.
  const RumourDataset dataset = two_event_dataset({S, S, S}, {C, C});
  const LoeoResult result = leave_one_event_out(
      dataset, [&](const RumourDataset&, const Event& test) {
        std::vector<StanceLabel> out;
        if (test.name == "alpha") out = {S, D, D};
        else out = {C, C};
        return out;
      });
  CHECK(result.aggregate.micro_f1 == doctest::Approx(3.0 / 5.0));
  CHECK(result.fold_reports[0].micro_f1 == doctest::Approx(1.0 / 3.0));
  CHECK(result.fold_reports[1].micro_f1 == 1.0);
}

TEST_CASE("leave-one-event-out failure modes") {
  {  // fewer than two events cannot be cross-validated
    RumourDataset dataset;
    Event only;
    only.name = "solo";
    only.conversations.push_back(
        ConversationTree::build({labeled_tweet("t", "solo", S)}));
    dataset.events = {std::move(only)};
    try {
      leave_one_event_out(dataset, [](const RumourDataset&, const Event&) {
        return std::vector<StanceLabel>{};
      });
      FAIL("expected InvalidSpec");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSpec);
    }
  }
  {  // runner output size must match the event tweet count
    const RumourDataset dataset = two_event_dataset({S}, {C});
    try {
      leave_one_event_out(dataset, [](const RumourDataset&, const Event&) {
        return std::vector<StanceLabel>{S, S, S};
      });
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }
  {  // a gold label missing anywhere is an error
    RumourDataset dataset = two_event_dataset({S}, {C});
    Tweet unlabeled;
    unlabeled.id = "u";
    unlabeled.text = "no label";
    unlabeled.event = "alpha";
    dataset.events[0].conversations.push_back(
        ConversationTree::build({unlabeled}));
    try {
      leave_one_event_out(dataset, [](const RumourDataset&, const Event& e) {
        std::vector<StanceLabel> out;
        std::size_t n = 0;
        for (const ConversationTree& tree : e.conversations) n += tree.size();
        out.assign(n, S);
        return out;
      });
      FAIL("expected MissingGoldLabel");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingGoldLabel);
    }
  }
  {  // fold errors are rethrown with the event named, same code
    const RumourDataset dataset = two_event_dataset({S}, {C});
    try {
      leave_one_event_out(dataset, [](const RumourDataset&, const Event& e)
                              -> std::vector<StanceLabel> {
        if (e.name == "beta")
          throw Error(ErrorCode::NonFiniteObjective, "diverged");
        return {S};
      });
      FAIL("expected the fold error to propagate");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteObjective);
      CHECK(std::string(e.what()).find("beta") != std::string::npos);
    }
  }
}
