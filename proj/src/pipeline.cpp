#include "sdqc/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "sdqc/baselines.hpp"
#include "sdqc/error.hpp"
#include "sdqc/pos_tagger.hpp"
#include "sdqc/report_io.hpp"
#include "sdqc/rng.hpp"
#include "sdqc/tokenize.hpp"

namespace sdqc {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kConfigFormat = "sdqc-config/1";
constexpr const char* kManifestFormat = "sdqc-manifest/1";
constexpr const char* kCodeVersion = "sdqc/0.1.0";

constexpr std::array<std::string_view, 6> kClassifierNames = {
    "tree_crf", "linear_crf", "maxent", "majority", "naive_bayes", "external"};

std::string_view step_rule_name(TrainConfig::StepRule rule) {
  return rule == TrainConfig::StepRule::Fixed ? "fixed" : "backtracking";
}

TrainConfig::StepRule parse_step_rule(const std::string& name) {
  if (name == "fixed") return TrainConfig::StepRule::Fixed;
  if (name == "backtracking") return TrainConfig::StepRule::Backtracking;
  throw Error(ErrorCode::SchemaViolation, "unknown step_rule `" + name + "`");
}

// Everything except the format marker, shared by config and manifest forms.
ordered_json config_body(const ExperimentConfig& c) {
  ordered_json j;
  j["classifier"] = std::string(classifier_name(c.classifier));
  j["seed"] = c.seed;
  j["dataset"] = c.dataset_path;
  j["drop_orphans"] = c.drop_orphans;
  j["depth_transitions"] = c.depth_transitions;
  j["trainer"] = ordered_json{
      {"lambda", c.trainer.lambda},
      {"max_iterations", c.trainer.max_iterations},
      {"gradient_tolerance", c.trainer.gradient_tolerance},
      {"step_rule", std::string(step_rule_name(c.trainer.step_rule))},
      {"fixed_step", c.trainer.fixed_step},
      {"parallel", c.trainer.parallel},
  };
  j["features"] = ordered_json{
      {"lexicon", c.features.lexicon},
      {"content_formatting", c.features.content_formatting},
      {"punctuation", c.features.punctuation},
      {"tweet_formatting", c.features.tweet_formatting},
  };
  j["embedding"] = ordered_json{
      {"dimension", c.embedding.dimension},
      {"window", c.embedding.window},
      {"negative", c.embedding.negative},
      {"epochs", c.embedding.epochs},
      {"min_count", c.embedding.min_count},
      {"learning_rate", c.embedding.learning_rate},
      {"threads", c.embedding.threads},
      {"unigram_table_size", c.embedding.unigram_table_size},
  };
  if (!c.embedding_path.empty()) j["embedding_path"] = c.embedding_path;
  if (!c.lexicon_path.empty()) j["lexicon_path"] = c.lexicon_path;
  if (!c.pos_sidecar_path.empty()) j["pos_sidecar_path"] = c.pos_sidecar_path;
  if (!c.external_predictions_path.empty())
    j["external_predictions_path"] = c.external_predictions_path;
  return j;
}

void require_positive(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidSpec, what);
}

void require_file(const std::string& path, const std::string& field) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::InvalidSpec,
                field + " does not exist: " + path);
}

// Event names become fold directory names; anything outside the portable
// filename alphabet is flattened to '_' and collisions get a numeric suffix.
std::string sanitize_component(const std::string& name,
                               std::set<std::string>& used) {
  std::string out;
  for (char ch : name) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                    (ch >= '0' && ch <= '9') || ch == '-' || ch == '_' ||
                    ch == '.';
    out.push_back(ok ? ch : '_');
  }
  if (out.empty()) out = "fold";
  std::string candidate = out;
  for (int suffix = 2; !used.insert(candidate).second; ++suffix)
    candidate = out + "-" + std::to_string(suffix);
  return candidate;
}

void make_dirs(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot create directory " + dir.string() + ": " + ec.message());
}

}  // namespace

std::string_view classifier_name(ClassifierKind kind) {
  return kClassifierNames[static_cast<int>(kind)];
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) {
  for (std::size_t i = 0; i < kClassifierNames.size(); ++i)
    if (kClassifierNames[i] == name) return kClassifierOrder[i];
  return std::nullopt;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::SchemaViolation, "config root must be an object");

  ExperimentConfig c;
  try {
    const std::string format = j.value("format", "");
    const bool is_manifest = format == kManifestFormat;
    if (format != kConfigFormat && !is_manifest)
      throw Error(ErrorCode::SchemaViolation,
                  "unsupported config format `" + format + "`");

    if (!j.contains("classifier"))
      throw Error(ErrorCode::SchemaViolation, "config requires `classifier`");
    const std::string cname = j.at("classifier").get<std::string>();
    const auto kind = parse_classifier(cname);
    if (!kind)
      throw Error(ErrorCode::SchemaViolation,
                  "unknown classifier `" + cname + "`");
    c.classifier = *kind;

    if (j.contains("seed")) {
      c.seed = j.at("seed").get<std::uint64_t>();
      c.seed_set = true;
    }
    c.dataset_path = j.value("dataset", "");
    c.output_dir = j.value("output_dir", "");  // accepted, never re-emitted
    c.drop_orphans = j.value("drop_orphans", false);
    c.depth_transitions = j.value("depth_transitions", false);

    if (j.contains("trainer")) {
      const auto& t = j.at("trainer");
      c.trainer.lambda = t.value("lambda", c.trainer.lambda);
      c.trainer.max_iterations =
          t.value("max_iterations", c.trainer.max_iterations);
      c.trainer.gradient_tolerance =
          t.value("gradient_tolerance", c.trainer.gradient_tolerance);
      if (t.contains("step_rule"))
        c.trainer.step_rule =
            parse_step_rule(t.at("step_rule").get<std::string>());
      c.trainer.fixed_step = t.value("fixed_step", c.trainer.fixed_step);
      c.trainer.parallel = t.value("parallel", c.trainer.parallel);
    }
    if (j.contains("features")) {
      const auto& f = j.at("features");
      c.features.lexicon = f.value("lexicon", c.features.lexicon);
      c.features.content_formatting =
          f.value("content_formatting", c.features.content_formatting);
      c.features.punctuation = f.value("punctuation", c.features.punctuation);
      c.features.tweet_formatting =
          f.value("tweet_formatting", c.features.tweet_formatting);
    }
    if (j.contains("embedding")) {
      const auto& e = j.at("embedding");
      c.embedding.dimension = e.value("dimension", c.embedding.dimension);
      c.embedding.window = e.value("window", c.embedding.window);
      c.embedding.negative = e.value("negative", c.embedding.negative);
      c.embedding.epochs = e.value("epochs", c.embedding.epochs);
      c.embedding.min_count = e.value("min_count", c.embedding.min_count);
      c.embedding.learning_rate =
          e.value("learning_rate", c.embedding.learning_rate);
      c.embedding.threads = e.value("threads", c.embedding.threads);
      c.embedding.unigram_table_size =
          e.value("unigram_table_size", c.embedding.unigram_table_size);
    }
    c.embedding_path = j.value("embedding_path", "");
    c.lexicon_path = j.value("lexicon_path", "");
    c.pos_sidecar_path = j.value("pos_sidecar_path", "");
    c.external_predictions_path = j.value("external_predictions_path", "");

    if (is_manifest) {
      if (!j.contains("dataset_fingerprint"))
        throw Error(ErrorCode::SchemaViolation,
                    "manifest lacks `dataset_fingerprint`");
      c.expected_fingerprint =
          j.at("dataset_fingerprint").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("malformed config field: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  return from_json_text(read_text_file(path));
}

std::string ExperimentConfig::to_json() const {
  ordered_json j;
  j["format"] = kConfigFormat;
  j.update(config_body(*this));
  return j.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
  if (!seed_set)
    throw Error(ErrorCode::InvalidSpec,
                "seed is mandatory; set it in the config or with --seed");
  if (classifier == ClassifierKind::External &&
      external_predictions_path.empty())
    throw Error(ErrorCode::InvalidSpec,
                "the external classifier requires external_predictions_path");
  require_positive(trainer.lambda >= 0.0, "trainer.lambda must be >= 0");
  require_positive(trainer.max_iterations >= 1,
                   "trainer.max_iterations must be >= 1");
  require_positive(trainer.gradient_tolerance > 0.0,
                   "trainer.gradient_tolerance must be > 0");
  require_positive(trainer.fixed_step > 0.0, "trainer.fixed_step must be > 0");
  require_positive(embedding.dimension >= 1, "embedding.dimension must be >= 1");
  require_positive(embedding.window >= 1, "embedding.window must be >= 1");
  require_positive(embedding.negative >= 0, "embedding.negative must be >= 0");
  require_positive(embedding.epochs >= 1, "embedding.epochs must be >= 1");
  require_positive(embedding.min_count >= 1, "embedding.min_count must be >= 1");
  require_positive(embedding.learning_rate > 0.0,
                   "embedding.learning_rate must be > 0");
  require_positive(embedding.threads >= 1, "embedding.threads must be >= 1");
  require_positive(embedding.unigram_table_size >= 1,
                   "embedding.unigram_table_size must be >= 1");
}

void ExperimentConfig::check_paths() const {
  if (dataset_path.empty())
    throw Error(ErrorCode::InvalidSpec, "dataset path is required");
  require_file(dataset_path, "dataset");
  if (!embedding_path.empty()) require_file(embedding_path, "embedding_path");
  if (!lexicon_path.empty()) require_file(lexicon_path, "lexicon_path");
  if (!pos_sidecar_path.empty())
    require_file(pos_sidecar_path, "pos_sidecar_path");
  if (!external_predictions_path.empty())
    require_file(external_predictions_path, "external_predictions_path");
}

TrainConfig ExperimentConfig::effective_trainer(
    const std::string& fold_name) const {
  TrainConfig tc = trainer;
  const bool edges_used = classifier == ClassifierKind::TreeCrf ||
                          classifier == ClassifierKind::LinearCrf;
  tc.transition_buckets = (depth_transitions && edges_used) ? 3 : 1;
  tc.seed = derive_seed(seed, "train-" + fold_name);
  return tc;
}

namespace {

// Per-node gold label, required for every training tweet.
StanceLabel require_gold(const Tweet& tweet) {
  if (!tweet.gold_label)
    throw Error(ErrorCode::MissingGoldLabel,
                "training tweet " + tweet.id + " has no gold label");
  return *tweet.gold_label;
}

TrainMode train_mode_of(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::TreeCrf:
      return TrainMode::TreeCrf;
    case ClassifierKind::LinearCrf:
      return TrainMode::LinearCrf;
    default:
      return TrainMode::MaxEnt;
  }
}

// The fold-local feature pipeline: embeddings (trained on the fold's
// training tweets unless a shared provider is given), extraction, and
// standardization statistics fit on training rows only.
struct FoldFeatures {
  EmbeddingProvider trained;  // storage when embeddings are fold-trained
  std::unique_ptr<FeatureExtractor> extractor;
  Standardizer standardizer;
  // Standardized rows per training tree, aligned with `train_trees`.
  std::vector<const ConversationTree*> train_trees;
  std::vector<std::vector<std::vector<double>>> train_rows;

  std::vector<std::vector<double>> rows_for(const ConversationTree& tree) const {
    std::vector<std::vector<double>> rows;
    rows.reserve(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i)
      rows.push_back(standardizer.applied(extractor->extract(tree.node(i))));
    return rows;
  }
};

FoldFeatures build_fold_features(const ExperimentConfig& config,
                                 const RumourDataset& train,
                                 const std::string& fold_name,
                                 const EmbeddingProvider* shared_embeddings,
                                 const PosTagger* tagger,
                                 const SwearLexicon* lexicon) {
  FoldFeatures ff;
  const EmbeddingProvider* provider = shared_embeddings;
  if (!provider) {
    std::vector<TokenList> corpus;
    for (const Event& ev : train.events)
      for (const ConversationTree& tree : ev.conversations)
        for (std::size_t i = 0; i < tree.size(); ++i)
          corpus.push_back(tokenize(tree.node(i).text));
    EmbeddingConfig ec = config.embedding;
    ec.seed = derive_seed(config.seed, "embeddings-" + fold_name);
    ff.trained = train_embeddings(corpus, ec);
    provider = &ff.trained;
  }
  ff.extractor = std::make_unique<FeatureExtractor>(provider, tagger, lexicon,
                                                    config.features);

  std::vector<std::vector<double>> flat;
  for (const Event& ev : train.events)
    for (const ConversationTree& tree : ev.conversations) {
      ff.train_trees.push_back(&tree);
      auto& rows = ff.train_rows.emplace_back();
      rows.reserve(tree.size());
      for (std::size_t i = 0; i < tree.size(); ++i) {
        rows.push_back(ff.extractor->extract(tree.node(i)));
        flat.push_back(rows.back());
      }
    }
  ff.standardizer = Standardizer::fit(flat, ff.extractor->layout());
  for (auto& rows : ff.train_rows)
    for (auto& row : rows) ff.standardizer.apply(row);
  return ff;
}

// Tree-shaped instance over standardized rows; gold filled from the tree.
CrfInstance tree_instance(const ConversationTree& tree,
                          std::vector<std::vector<double>> rows,
                          bool with_gold, bool depth_buckets) {
  CrfInstance inst;
  inst.shape = InstanceShape::from_tree(tree);
  inst.features = std::move(rows);
  inst.gold.resize(tree.size());
  inst.tweet_ids.resize(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (with_gold) inst.gold[i] = tree.node(i).gold_label;
    inst.tweet_ids[i] = tree.node(i).id;
  }
  if (depth_buckets) {
    inst.edge_bucket.resize(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i)
      inst.edge_bucket[i] = depth_transition_bucket(tree.depth_of_index(i));
  }
  return inst;
}

// Chain instance for one root-to-leaf branch; node k sits at depth k.
CrfInstance branch_instance(const ConversationTree& tree, const Branch& branch,
                            const std::vector<std::vector<double>>& tree_rows,
                            bool with_gold, bool depth_buckets) {
  CrfInstance inst;
  const std::size_t n = branch.node_indices.size();
  inst.shape = InstanceShape::chain(n);
  inst.features.reserve(n);
  inst.gold.resize(n);
  inst.tweet_ids.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t node = branch.node_indices[k];
    inst.features.push_back(tree_rows[node]);
    if (with_gold) inst.gold[k] = tree.node(node).gold_label;
    inst.tweet_ids.push_back(branch.path[k]);
  }
  if (depth_buckets) {
    inst.edge_bucket.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      inst.edge_bucket[k] = depth_transition_bucket(static_cast<int>(k));
  }
  return inst;
}

}  // namespace

RunResult run_loeo(const ExperimentConfig& config,
                   const RumourDataset& dataset) {
  config.validate();
  RunResult result;
  result.fingerprint = dataset_fingerprint(dataset);
  if (config.expected_fingerprint &&
      *config.expected_fingerprint != result.fingerprint)
    throw Error(ErrorCode::DatasetMismatch,
                "dataset hashes to " + result.fingerprint +
                    " but the manifest recorded " +
                    *config.expected_fingerprint);

  SwearLexicon lexicon = config.lexicon_path.empty()
                             ? SwearLexicon{}
                             : SwearLexicon::load(config.lexicon_path);
  std::unique_ptr<PosTagger> tagger;
  if (config.pos_sidecar_path.empty())
    tagger = std::make_unique<RulePosTagger>();
  else
    tagger = std::make_unique<SidecarPosTagger>(
        SidecarPosTagger::load(config.pos_sidecar_path));
  std::optional<EmbeddingProvider> shared_embeddings;
  if (!config.embedding_path.empty())
    shared_embeddings = EmbeddingProvider::load(config.embedding_path);
  std::map<std::string, StanceLabel> external;
  if (config.classifier == ClassifierKind::External)
    external = import_external_predictions(config.external_predictions_path);

  const bool depth_buckets =
      config.depth_transitions && (config.classifier == ClassifierKind::TreeCrf ||
                                   config.classifier == ClassifierKind::LinearCrf);

  FoldRunner runner = [&](const RumourDataset& train,
                          const Event& test) -> std::vector<StanceLabel> {
    std::vector<StanceLabel> out;

    switch (config.classifier) {
      case ClassifierKind::Majority: {
        std::vector<StanceLabel> gold;
        for (const Event& ev : train.events)
          for (const ConversationTree& tree : ev.conversations)
            for (std::size_t i = 0; i < tree.size(); ++i)
              gold.push_back(require_gold(tree.node(i)));
        const MajorityModel model = train_majority(gold);
        result.fold_models.push_back(model.to_json());
        std::size_t count = 0;
        for (const ConversationTree& tree : test.conversations)
          count += tree.size();
        return predict_majority(model, count);
      }

      case ClassifierKind::External: {
        for (const ConversationTree& tree : test.conversations)
          for (std::size_t i = 0; i < tree.size(); ++i) {
            const auto it = external.find(tree.node(i).id);
            if (it == external.end())
              throw Error(ErrorCode::MissingPrediction,
                          "no external prediction for tweet " +
                              tree.node(i).id);
            out.push_back(it->second);
          }
        result.fold_models.push_back("");
        return out;
      }

      case ClassifierKind::NaiveBayes: {
        FoldFeatures ff = build_fold_features(
            config, train, test.name,
            shared_embeddings ? &*shared_embeddings : nullptr, tagger.get(),
            &lexicon);
        std::vector<std::vector<double>> rows;
        std::vector<StanceLabel> gold;
        for (std::size_t t = 0; t < ff.train_trees.size(); ++t) {
          const ConversationTree& tree = *ff.train_trees[t];
          for (std::size_t i = 0; i < tree.size(); ++i) {
            gold.push_back(require_gold(tree.node(i)));
            rows.push_back(std::move(ff.train_rows[t][i]));
          }
        }
        const GaussianNbModel model = train_nb(rows, gold);
        result.fold_models.push_back(model.to_json());
        for (const ConversationTree& tree : test.conversations)
          for (const auto& row : ff.rows_for(tree))
            out.push_back(predict_nb(model, row));
        return out;
      }

      default: {  // the CRF family, MaxEnt included
        const TrainMode mode = train_mode_of(config.classifier);
        FoldFeatures ff = build_fold_features(
            config, train, test.name,
            shared_embeddings ? &*shared_embeddings : nullptr, tagger.get(),
            &lexicon);

        std::vector<CrfInstance> instances;
        for (std::size_t t = 0; t < ff.train_trees.size(); ++t) {
          const ConversationTree& tree = *ff.train_trees[t];
          if (mode == TrainMode::LinearCrf) {
            for (const Branch& branch : extract_branches(tree))
              instances.push_back(branch_instance(
                  tree, branch, ff.train_rows[t], true, depth_buckets));
          } else {
            instances.push_back(tree_instance(
                tree, std::move(ff.train_rows[t]), true, depth_buckets));
          }
        }

        const TrainConfig tc = config.effective_trainer(test.name);
        CrfModel model(ff.extractor->layout(), mode, tc.lambda,
                       tc.transition_buckets);
        model = train_from(std::move(model), instances, tc, mode);
        result.fold_models.push_back(model.to_json());

        for (const ConversationTree& tree : test.conversations) {
          const auto rows = ff.rows_for(tree);
          if (mode == TrainMode::LinearCrf) {
            std::vector<std::pair<Branch, std::vector<StanceLabel>>> preds;
            for (const Branch& branch : extract_branches(tree)) {
              CrfInstance inst =
                  branch_instance(tree, branch, rows, false, depth_buckets);
              preds.emplace_back(branch, predict(model, inst, mode));
            }
            const AggregatedPredictions agg =
                aggregate_branch_predictions(preds);
            result.branch_disagreements += agg.disagreements;
            for (std::size_t i = 0; i < tree.size(); ++i)
              out.push_back(agg.labels.at(tree.node(i).id));
          } else {
            CrfInstance inst = tree_instance(tree, rows, false, depth_buckets);
            for (StanceLabel y : predict(model, inst, mode))
              out.push_back(y);
          }
        }
        return out;
      }
    }
  };

  result.loeo = leave_one_event_out(dataset, runner);
  for (const EvalReport& report : result.loeo.fold_reports)
    result.fold_events.push_back(report.fold_id.value_or(""));
  return result;
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  config.check_paths();
  if (config.output_dir.empty())
    throw Error(ErrorCode::InvalidSpec,
                "output directory is required; pass --out or set output_dir");

  LoadSummary summary;
  RumourDataset dataset = load_dataset(
      config.dataset_path, LoadOptions{config.drop_orphans}, &summary);
  RunResult result = run_loeo(config, dataset);
  result.load_summary = summary;

  namespace fs = std::filesystem;
  const fs::path out(config.output_dir);
  make_dirs(out / "folds");
  make_dirs(out / "aggregate");

  const std::string cname(classifier_name(config.classifier));
  std::set<std::string> used_names;
  for (std::size_t f = 0; f < result.loeo.fold_reports.size(); ++f) {
    const EvalReport& report = result.loeo.fold_reports[f];
    const fs::path fold_dir =
        out / "folds" / sanitize_component(result.fold_events[f], used_names);
    make_dirs(fold_dir);
    write_text_file((fold_dir / "report.txt").string(),
                    render_report(report, cname));
    write_text_file((fold_dir / "confusion.tsv").string(),
                    confusion_tsv(report.confusion));
    write_text_file((fold_dir / "per_class.tsv").string(),
                    per_class_tsv(report.per_class));
    write_text_file((fold_dir / "per_depth.tsv").string(),
                    per_depth_tsv(report.per_depth));
    write_text_file((fold_dir / "predictions.tsv").string(),
                    predictions_tsv({result.loeo.fold_tweets[f]},
                                    {result.fold_events[f]}));
    if (f < result.fold_models.size() && !result.fold_models[f].empty())
      write_text_file((fold_dir / "model.json").string(),
                      result.fold_models[f]);
  }

  std::vector<std::string> extra;
  if (config.classifier == ClassifierKind::LinearCrf)
    extra.push_back("branch_disagreements: " +
                    std::to_string(result.branch_disagreements));
  write_text_file((out / "aggregate" / "report.txt").string(),
                  render_report(result.loeo.aggregate, cname, extra));
  write_text_file((out / "aggregate" / "confusion.tsv").string(),
                  confusion_tsv(result.loeo.aggregate.confusion));
  write_text_file((out / "aggregate" / "per_class.tsv").string(),
                  per_class_tsv(result.loeo.aggregate.per_class));
  write_text_file((out / "aggregate" / "per_depth.tsv").string(),
                  per_depth_tsv(result.loeo.aggregate.per_depth));
  write_text_file((out / "aggregate" / "metrics.tsv").string(),
                  metrics_tsv(result.loeo.aggregate));
  write_text_file((out / "aggregate" / "predictions.tsv").string(),
                  predictions_tsv(result.loeo.fold_tweets, result.fold_events));

  write_text_file_atomic((out / "manifest.json").string(),
                         manifest_json(config, result.fingerprint));
  return result;
}

std::string manifest_json(const ExperimentConfig& config,
                          const std::string& fingerprint) {
  ordered_json j;
  j["format"] = kManifestFormat;
  j["code_version"] = kCodeVersion;
  j["dataset_fingerprint"] = fingerprint;
  j.update(config_body(config));
  return j.dump(2) + "\n";
}

std::string compare_runs(const std::vector<std::string>& run_dirs) {
  if (run_dirs.size() < 2)
    throw Error(ErrorCode::InvalidSpec,
                "compare needs at least two run directories");

  struct Row {
    int order = 0;
    std::string classifier;
    std::string fingerprint;
    std::string dir;
    std::map<std::string, std::string> metrics;
  };
  std::vector<Row> rows;

  for (const std::string& dir : run_dirs) {
    Row row;
    row.dir = dir;
    const std::string manifest_text = read_text_file(dir + "/manifest.json");
    try {
      const auto j = nlohmann::json::parse(manifest_text);
      row.classifier = j.at("classifier").get<std::string>();
      row.fingerprint = j.at("dataset_fingerprint").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaViolation,
                  "malformed manifest in " + dir + ": " + e.what());
    }
    const auto kind = parse_classifier(row.classifier);
    if (!kind)
      throw Error(ErrorCode::SchemaViolation,
                  "manifest in " + dir + " names unknown classifier `" +
                      row.classifier + "`");
    row.order = static_cast<int>(*kind);

    const std::string metrics_text =
        read_text_file(dir + "/aggregate/metrics.tsv");
    std::istringstream lines(metrics_text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      row.metrics[line.substr(0, tab)] = line.substr(tab + 1);
    }
    rows.push_back(std::move(row));
  }

  for (const Row& row : rows)
    if (row.fingerprint != rows.front().fingerprint)
      throw Error(ErrorCode::DatasetMismatch,
                  "run " + row.dir + " used a different dataset (" +
                      row.fingerprint + " vs " + rows.front().fingerprint +
                      ")");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.order < b.order; });

  static constexpr std::array<const char*, 6> kMetricKeys = {
      "micro_f1",   "macro_f1",    "f1_supporting",
      "f1_denying", "f1_querying", "f1_commenting"};

  std::ostringstream out;
  out << "# format: sdqc-compare/1\n";
  out << "dataset_fingerprint: " << rows.front().fingerprint << "\n\n";
  out << std::left << std::setw(12) << "classifier" << std::right;
  for (const char* key : kMetricKeys) out << std::setw(15) << key;
  out << "  run\n";
  for (const Row& row : rows) {
    out << std::left << std::setw(12) << row.classifier << std::right;
    for (const char* key : kMetricKeys) {
      const auto it = row.metrics.find(key);
      if (it == row.metrics.end())
        throw Error(ErrorCode::SchemaViolation,
                    "metrics.tsv in " + row.dir + " lacks `" + key + "`");
      out << std::setw(15) << it->second;
    }
    out << "  " << row.dir << "\n";
  }
  return out.str();
}

std::string render_tree(const ConversationTree& tree) {
  std::ostringstream out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Tweet& tweet = tree.node(i);
    out << std::string(2 * tree.depth_of_index(i), ' ') << '['
        << (tweet.gold_label ? label_short_name(*tweet.gold_label) : "-")
        << "] " << tweet.id << ": " << tweet.text << "\n";
  }
  return out.str();
}

}  // namespace sdqc
