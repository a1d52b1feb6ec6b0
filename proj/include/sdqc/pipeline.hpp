#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdqc/conversation.hpp"
#include "sdqc/crf.hpp"
#include "sdqc/dataset_io.hpp"
#include "sdqc/embeddings.hpp"
#include "sdqc/evaluation.hpp"
#include "sdqc/features.hpp"

namespace sdqc {

// Everything the harness can run, including the import path for predictions
// produced outside this toolkit.
enum class ClassifierKind {
  TreeCrf,
  LinearCrf,
  MaxEnt,
  Majority,
  NaiveBayes,
  External,
};

inline constexpr std::array<ClassifierKind, 6> kClassifierOrder = {
    ClassifierKind::TreeCrf,   ClassifierKind::LinearCrf,
    ClassifierKind::MaxEnt,    ClassifierKind::Majority,
    ClassifierKind::NaiveBayes, ClassifierKind::External,
};

std::string_view classifier_name(ClassifierKind kind);
std::optional<ClassifierKind> parse_classifier(std::string_view name);

// One experiment: a classifier, a dataset, a seed and the knobs of every
// stage. Serializes to sdqc-config/1; a completed run re-emits it inside the
// sdqc-manifest/1 with the code version and dataset fingerprint added, which
// is enough to reproduce the run byte for byte.
struct ExperimentConfig {
  ClassifierKind classifier = ClassifierKind::TreeCrf;
  std::uint64_t seed = 0;
  bool seed_set = false;  // the seed is mandatory; validate() enforces it
  std::string dataset_path;
  std::string output_dir;  // never serialized: a rerun may target a new dir
  TrainConfig trainer;
  FeatureToggles features;
  EmbeddingConfig embedding;
  std::string embedding_path;             // pretrained vectors, else per-fold
  std::string lexicon_path;               // swear lexicon, else empty lexicon
  std::string pos_sidecar_path;           // gold POS tags, else rule tagger
  std::string external_predictions_path;  // required for External
  bool depth_transitions = false;  // 3 depth-bucketed transition matrices
  bool drop_orphans = false;
  // Present when the config came from a manifest; the rerun refuses to
  // proceed if the dataset on disk no longer hashes to this.
  std::optional<std::string> expected_fingerprint;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string to_json() const;

  // Semantic checks (mandatory seed, classifier/path pairing, positive
  // hyperparameters). Throws InvalidSpec.
  void validate() const;
  // Existence checks for every referenced path. Throws InvalidSpec.
  void check_paths() const;

  // The trainer config actually used: transition bucket count resolved from
  // depth_transitions, sub-seed derived from the master seed.
  TrainConfig effective_trainer(const std::string& fold_name) const;
};

struct RunResult {
  LoeoResult loeo;
  std::vector<std::string> fold_events;  // aligned with loeo.fold_reports
  std::vector<std::string> fold_models;  // model JSON per fold; may be empty
  std::string fingerprint;
  LoadSummary load_summary;
  int branch_disagreements = 0;  // linear-chain mode only
};

// Cross-validation without touching the filesystem for outputs (inputs such
// as lexicons are still read). Used by tests and the compare path.
RunResult run_loeo(const ExperimentConfig& config, const RumourDataset& dataset);

// Full experiment: loads the dataset, runs leave-one-event-out, writes
//   folds/<event>/{report.txt,confusion.tsv,per_class.tsv,per_depth.tsv,
//                  predictions.tsv,model.json}
//   aggregate/{report.txt,confusion.tsv,per_class.tsv,per_depth.tsv,
//              metrics.tsv,predictions.tsv}
// under config.output_dir and finishes with an atomic manifest.json write —
// a directory with a manifest is a completed run.
RunResult run_experiment(const ExperimentConfig& config);

std::string manifest_json(const ExperimentConfig& config,
                          const std::string& fingerprint);

// Table-2-shaped side-by-side of two or more completed runs: one row per
// run in canonical classifier order, columns micro/macro/per-class F1.
// Throws InvalidSpec (< 2 dirs), DatasetMismatch (different fingerprints),
// IoError (incomplete run).
std::string compare_runs(const std::vector<std::string>& run_dirs);

// Figure-1-style rendering of one conversation: one line per tweet,
// indented by depth, with the short label in brackets.
std::string render_tree(const ConversationTree& tree);

}  // namespace sdqc
