// Training behavior: monotone ascent, determinism, the MaxEnt reduction,
// label-permutation equivariance, planted-structure recovery and the
// documented failure modes.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle_helpers.hpp"
#include "sdqc/error.hpp"

using namespace sdqc;

namespace {

std::vector<CrfInstance> random_batch(Rng& rng, int count, int width,
                                      bool chain = false, int buckets = 1) {
  std::vector<CrfInstance> batch;
  for (int i = 0; i < count; ++i)
    batch.push_back(oracle::random_instance(rng, 6, width, chain, buckets));
  return batch;
}

}  // namespace

TEST_CASE("backtracking ascent never decreases the objective") {
  Rng rng(1001);
  const int width = 6;
  const std::vector<CrfInstance> batch = random_batch(rng, 12, width);

  FeatureLayout layout;
  layout.add("features", width);
  CrfModel model(layout, TrainMode::TreeCrf, 1.0);

  TrainConfig config;
  config.max_iterations = 1;
  double previous = objective_value(model, batch, TrainMode::TreeCrf, false);
  for (int step = 0; step < 40; ++step) {
    model = train_from(std::move(model), batch, config, TrainMode::TreeCrf);
    const double current =
        objective_value(model, batch, TrainMode::TreeCrf, false);
    CHECK(current >= previous - 1e-12);
    previous = current;
  }
}

TEST_CASE("training is deterministic and parallel mode changes nothing") {
  Rng rng(12);
  const std::vector<CrfInstance> batch = random_batch(rng, 10, 5);
  TrainConfig config;
  config.max_iterations = 60;

  const CrfModel a = train(batch, config, TrainMode::TreeCrf);
  const CrfModel b = train(batch, config, TrainMode::TreeCrf);
  CHECK(a.pack() == b.pack());

  TrainConfig serial = config;
  serial.parallel = false;
  const CrfModel c = train(batch, serial, TrainMode::TreeCrf);
  CHECK(a.pack() == c.pack());
}

TEST_CASE("a converged model satisfies the first-order condition") {
  Rng rng(303);
  const std::vector<CrfInstance> batch = random_batch(rng, 8, 4);
  TrainConfig config;
  config.max_iterations = 500;
  config.gradient_tolerance = 1e-7;

  const CrfModel model = train(batch, config, TrainMode::TreeCrf);
  const std::vector<double> grad =
      gradient(model, batch, TrainMode::TreeCrf, false);
  double inf_norm = 0.0;
  for (double g : grad) inf_norm = std::max(inf_norm, std::abs(g));
  CHECK(inf_norm <= 1e-7);

  // Warm-starting from the optimum terminates immediately at the optimum.
  const CrfModel again = train_from(model, batch, config, TrainMode::TreeCrf);
  CHECK(again.pack() == model.pack());
}

TEST_CASE("MaxEnt on a tree equals MaxEnt on its nodes split apart") {
  Rng rng(51);
  const int width = 5;
  const CrfInstance joint = oracle::random_instance(rng, 6, width);

  std::vector<CrfInstance> split;
  for (std::size_t i = 0; i < joint.size(); ++i) {
    CrfInstance single;
    single.shape = InstanceShape::chain(1);
    single.features = {joint.features[i]};
    single.gold = {joint.gold[i]};
    split.push_back(std::move(single));
  }

  TrainConfig config;
  config.max_iterations = 80;
  const CrfModel from_joint =
      train(std::vector<CrfInstance>{joint}, config, TrainMode::MaxEnt);
  const CrfModel from_split = train(split, config, TrainMode::MaxEnt);

  const std::vector<double> pj = from_joint.pack();
  const std::vector<double> ps = from_split.pack();
  REQUIRE(pj.size() == ps.size());
  for (std::size_t k = 0; k < pj.size(); ++k)
    CHECK(pj[k] == doctest::Approx(ps[k]).epsilon(1e-9));

  // Transitions stay identically zero in MaxEnt mode.
  for (int yp = 0; yp < 4; ++yp)
    for (int yc = 0; yc < 4; ++yc) CHECK(from_joint.transition(0, yp, yc) == 0.0);
}

TEST_CASE("training is equivariant under a relabeling of the classes") {
  Rng rng(4040);
  const int width = 4;
  std::vector<CrfInstance> batch = random_batch(rng, 8, width);

  // Swap Supporting <-> Commenting everywhere.
  auto swap_label = [](StanceLabel y) {
    if (y == StanceLabel::Supporting) return StanceLabel::Commenting;
    if (y == StanceLabel::Commenting) return StanceLabel::Supporting;
    return y;
  };
  std::vector<CrfInstance> swapped = batch;
  for (CrfInstance& inst : swapped)
    for (auto& g : inst.gold) g = swap_label(*g);

  TrainConfig config;
  config.max_iterations = 60;
  const CrfModel original = train(batch, config, TrainMode::TreeCrf);
  const CrfModel relabeled = train(swapped, config, TrainMode::TreeCrf);

  const int a = label_index(StanceLabel::Supporting);
  const int b = label_index(StanceLabel::Commenting);
  auto mapped = [&](int y) { return y == a ? b : (y == b ? a : y); };

  for (int y = 0; y < 4; ++y) {
    CHECK(original.bias(y) ==
          doctest::Approx(relabeled.bias(mapped(y))).epsilon(1e-8));
    for (int f = 0; f < width; ++f)
      CHECK(original.node_weight(y, f) ==
            doctest::Approx(relabeled.node_weight(mapped(y), f)).epsilon(1e-8));
  }
  for (int yp = 0; yp < 4; ++yp)
    for (int yc = 0; yc < 4; ++yc)
      CHECK(original.transition(0, yp, yc) ==
            doctest::Approx(relabeled.transition(0, mapped(yp), mapped(yc)))
                .epsilon(1e-8));
}

TEST_CASE("planted transition structure is recovered from data") {
  // Features carry no signal at all; the only structure is that a child's
  // label always equals its parent's. The learned transition matrix must
  // become diagonally dominant.
  Rng rng(606);
  const int width = 2;
  std::vector<CrfInstance> batch;
  for (int t = 0; t < 40; ++t) {
    CrfInstance inst = oracle::random_instance(rng, 6, width);
    const StanceLabel root =
        kLabelOrder[rng.next_below(kNumLabels)];
    for (auto& g : inst.gold) g = root;
    for (auto& row : inst.features)
      for (double& v : row) v = 0.0;
    batch.push_back(std::move(inst));
  }

  TrainConfig config;
  config.max_iterations = 150;
  config.lambda = 0.1;
  const CrfModel model = train(batch, config, TrainMode::TreeCrf);
  for (int yp = 0; yp < 4; ++yp)
    for (int yc = 0; yc < 4; ++yc)
      if (yp != yc)
        CHECK(model.transition(0, yp, yp) > model.transition(0, yp, yc));
}

TEST_CASE("depth-bucketed training learns distinct matrices when depths differ") {
  // Edges into depth 1 copy the parent label; deeper edges always flip
  // Supporting <-> Denying. One shared matrix cannot represent both.
  Rng rng(111);
  std::vector<CrfInstance> batch;
  for (int t = 0; t < 30; ++t) {
    CrfInstance inst;
    inst.shape = InstanceShape::chain(4);
    inst.features.assign(4, std::vector<double>(2, 0.0));
    const StanceLabel a = (t % 2 == 0) ? StanceLabel::Supporting
                                       : StanceLabel::Denying;
    const StanceLabel b = (a == StanceLabel::Supporting)
                              ? StanceLabel::Denying
                              : StanceLabel::Supporting;
    inst.gold = {a, a, b, a};
    inst.edge_bucket = {0, 0, 1, 2};
    batch.push_back(std::move(inst));
  }

  TrainConfig config;
  config.max_iterations = 200;
  config.lambda = 0.1;
  config.transition_buckets = 3;
  const CrfModel model = train(batch, config, TrainMode::TreeCrf);
  const int s = label_index(StanceLabel::Supporting);
  const int d = label_index(StanceLabel::Denying);
  // Bucket 0 prefers to copy; bucket 1 prefers to flip.
  CHECK(model.transition(0, s, s) > model.transition(0, s, d));
  CHECK(model.transition(1, s, d) > model.transition(1, s, s));
}

TEST_CASE("trainer failure modes carry the documented error codes") {
  {  // empty training set
    try {
      train({}, TrainConfig{}, TrainMode::TreeCrf);
      FAIL("expected EmptyTrainingSet");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyTrainingSet);
    }
  }
  {  // non-finite feature poisons the initial objective
    CrfInstance inst;
    inst.shape = InstanceShape::chain(1);
    inst.features = {{std::numeric_limits<double>::infinity()}};
    inst.gold = {StanceLabel::Supporting};
    try {
      train(std::vector<CrfInstance>{inst}, TrainConfig{}, TrainMode::TreeCrf);
      FAIL("expected NonFiniteObjective");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteObjective);
    }
  }
  {  // a wildly oversized fixed step diverges and is reported
    Rng rng(7);
    const std::vector<CrfInstance> batch = random_batch(rng, 4, 3);
    TrainConfig config;
    config.step_rule = TrainConfig::StepRule::Fixed;
    config.fixed_step = 1e6;
    config.max_iterations = 200;
    try {
      train(batch, config, TrainMode::TreeCrf);
      FAIL("expected NonFiniteObjective");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonFiniteObjective);
    }
  }
  {  // invalid bucket count in the model constructor
    FeatureLayout layout;
    layout.add("features", 3);
    try {
      CrfModel model(layout, TrainMode::TreeCrf, 1.0, 0);
      FAIL("expected InvalidSpec");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidSpec);
    }
  }
}

TEST_CASE("prediction decodes with the mode-appropriate algorithm") {
  Rng rng(88);
  const int width = 4;
  const std::vector<CrfInstance> batch = random_batch(rng, 10, width);
  TrainConfig config;
  config.max_iterations = 60;
  const CrfModel model = train(batch, config, TrainMode::TreeCrf);

  const CrfInstance probe = oracle::random_instance(rng, 6, width);
  const std::vector<StanceLabel> labels =
      predict(model, probe, TrainMode::TreeCrf);
  REQUIRE(labels.size() == probe.size());

  // Tree prediction equals max-product on the computed potentials.
  const Potentials pot = compute_potentials(model, probe, TrainMode::TreeCrf);
  CHECK(labels == max_product(pot).labels);

  // MaxEnt prediction equals the per-node argmax of node potentials.
  const std::vector<StanceLabel> me = predict(model, probe, TrainMode::MaxEnt);
  const Potentials pot_me = compute_potentials(model, probe, TrainMode::MaxEnt);
  for (std::size_t i = 0; i < probe.size(); ++i) {
    int best = 0;
    for (int y = 1; y < 4; ++y)
      if (pot_me.node(i, y) > pot_me.node(i, best)) best = y;
    CHECK(label_index(me[i]) == best);
  }
}

TEST_CASE("branch-vote aggregation follows majority with fixed-order ties") {
  Branch left;
  left.node_indices = {0, 1};
  left.path = {"root", "a"};
  Branch right;
  right.node_indices = {0, 2};
  right.path = {"root", "b"};

  {  // unanimous root, no disagreement
    const AggregatedPredictions agg = aggregate_branch_predictions({
        {left, {StanceLabel::Supporting, StanceLabel::Denying}},
        {right, {StanceLabel::Supporting, StanceLabel::Querying}},
    });
    CHECK(agg.labels.at("root") == StanceLabel::Supporting);
    CHECK(agg.labels.at("a") == StanceLabel::Denying);
    CHECK(agg.labels.at("b") == StanceLabel::Querying);
    CHECK(agg.disagreements == 0);
  }
  {  // split root vote: tie resolved toward the lowest label in fixed order
    const AggregatedPredictions agg = aggregate_branch_predictions({
        {left, {StanceLabel::Commenting, StanceLabel::Denying}},
        {right, {StanceLabel::Querying, StanceLabel::Querying}},
    });
    CHECK(agg.labels.at("root") == StanceLabel::Querying);
    CHECK(agg.disagreements == 1);
  }
  {  // majority wins over the fixed order
    Branch third;
    third.node_indices = {0, 3};
    third.path = {"root", "c"};
    const AggregatedPredictions agg = aggregate_branch_predictions({
        {left, {StanceLabel::Commenting, StanceLabel::Denying}},
        {right, {StanceLabel::Commenting, StanceLabel::Querying}},
        {third, {StanceLabel::Supporting, StanceLabel::Querying}},
    });
    CHECK(agg.labels.at("root") == StanceLabel::Commenting);
    CHECK(agg.disagreements == 1);
  }
  {  // errors
    try {
      aggregate_branch_predictions({});
      FAIL("expected EmptyInput");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyInput);
    }
    try {
      aggregate_branch_predictions({{left, {StanceLabel::Supporting}}});
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }
}

TEST_CASE("train-mode names round-trip") {
  for (TrainMode mode :
       {TrainMode::TreeCrf, TrainMode::LinearCrf, TrainMode::MaxEnt}) {
    const auto parsed = parse_train_mode(train_mode_name(mode));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == mode);
  }
  CHECK_FALSE(parse_train_mode("svm").has_value());
}
