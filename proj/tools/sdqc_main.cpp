#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdqc/dataset_io.hpp"
#include "sdqc/error.hpp"
#include "sdqc/pipeline.hpp"
#include "sdqc/report_io.hpp"
#include "sdqc/synthetic.hpp"

namespace {

void cmd_ingest(const std::string& path, bool drop_orphans,
                const std::string& out_path) {
  sdqc::LoadSummary summary;
  const sdqc::RumourDataset dataset =
      sdqc::load_dataset(path, sdqc::LoadOptions{drop_orphans}, &summary);
  std::cout << sdqc::summarize_dataset(dataset);
  std::cout << "\nevents: " << summary.events
            << "  conversations: " << summary.conversations
            << "  tweets: " << summary.tweets << "\n";
  if (summary.dropped_orphans > 0)
    std::cout << "dropped orphan replies: " << summary.dropped_orphans << "\n";
  std::cout << "fingerprint: " << sdqc::dataset_fingerprint(dataset) << "\n";
  if (!out_path.empty()) {
    sdqc::write_text_file(out_path, sdqc::emit_dataset(dataset));
    std::cout << "wrote " << out_path << "\n";
  }
}

void cmd_synth(const sdqc::SyntheticSpec& spec, const std::string& out_path) {
  const sdqc::RumourDataset dataset = sdqc::generate_synthetic(spec);
  sdqc::write_text_file(out_path, sdqc::emit_dataset(dataset));
  std::cout << sdqc::summarize_dataset(dataset);
  std::cout << "\nfingerprint: " << sdqc::dataset_fingerprint(dataset) << "\n";
  std::cout << "wrote " << out_path << "\n";
}

void cmd_run(const sdqc::ExperimentConfig& config) {
  const sdqc::RunResult result = sdqc::run_experiment(config);
  std::vector<std::string> extra;
  if (config.classifier == sdqc::ClassifierKind::LinearCrf)
    extra.push_back("branch_disagreements: " +
                    std::to_string(result.branch_disagreements));
  std::cout << sdqc::render_report(
      result.loeo.aggregate,
      std::string(sdqc::classifier_name(config.classifier)), extra);
  std::cout << "\nartifacts in " << config.output_dir << "\n";
}

void cmd_inspect(const std::string& path, bool drop_orphans,
                 const std::string& event_filter, int tree_filter) {
  const sdqc::RumourDataset dataset =
      sdqc::load_dataset(path, sdqc::LoadOptions{drop_orphans});
  bool event_seen = false;
  for (const sdqc::Event& event : dataset.events) {
    if (!event_filter.empty() && event.name != event_filter) continue;
    event_seen = true;
    if (tree_filter >= 0 &&
        static_cast<std::size_t>(tree_filter) >= event.conversations.size())
      throw sdqc::Error(sdqc::ErrorCode::InvalidSpec,
                        "event " + event.name + " has only " +
                            std::to_string(event.conversations.size()) +
                            " conversations");
    for (std::size_t c = 0; c < event.conversations.size(); ++c) {
      if (tree_filter >= 0 && static_cast<std::size_t>(tree_filter) != c)
        continue;
      const sdqc::ConversationTree& tree = event.conversations[c];
      std::cout << "event " << event.name << ", conversation " << c << " ("
                << tree.size() << " tweets)\n";
      std::cout << sdqc::render_tree(tree) << "\n";
    }
  }
  if (!event_filter.empty() && !event_seen)
    throw sdqc::Error(sdqc::ErrorCode::UnknownId,
                      "no event named `" + event_filter + "`");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Rumour stance toolkit: label conversation trees as "
      "supporting/denying/querying/commenting"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "Validate a dataset file and print per-event class counts");
  std::string ingest_path;
  std::string ingest_out;
  bool ingest_drop = false;
  ingest->add_option("dataset", ingest_path, "Dataset JSON file")->required();
  ingest->add_flag("--drop-orphans", ingest_drop,
                   "Drop replies whose parent is missing instead of failing");
  ingest->add_option("--out", ingest_out,
                     "Write the canonical serialization to this path");
  ingest->callback([&] { cmd_ingest(ingest_path, ingest_drop, ingest_out); });

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic dataset with planted label structure");
  sdqc::SyntheticSpec spec;
  std::string synth_out;
  synth->add_option("--out", synth_out, "Output dataset path")->required();
  synth->add_option("--seed", spec.seed, "Generator seed");
  synth->add_option("--events", spec.events, "Number of events");
  synth->add_option("--trees", spec.trees_per_event, "Conversations per event");
  synth->add_option("--max-depth", spec.max_depth, "Maximum reply depth");
  synth->callback([&] { cmd_synth(spec, synth_out); });

  // run
  auto* run = app.add_subcommand(
      "run", "Run a leave-one-event-out experiment and write reports");
  std::string run_config;
  std::string run_dataset;
  std::string run_classifier;
  std::string run_out;
  std::uint64_t run_seed = 0;
  bool run_drop = false;
  bool run_depth = false;
  run->add_option("--config", run_config,
                  "Experiment config (or a manifest from a previous run)");
  run->add_option("--dataset", run_dataset, "Dataset JSON file");
  run->add_option("--classifier", run_classifier,
                  "tree_crf | linear_crf | maxent | majority | naive_bayes | "
                  "external");
  run->add_option("--seed", run_seed, "Master seed (mandatory here or in the "
                                      "config)");
  run->add_flag("--drop-orphans", run_drop,
                "Drop replies whose parent is missing instead of failing");
  run->add_flag("--depth-transitions", run_depth,
                "Learn 3 depth-bucketed transition matrices");
  run->add_option("--out", run_out, "Output directory for reports");
  run->callback([&] {
    sdqc::ExperimentConfig config;
    if (!run_config.empty()) config = sdqc::ExperimentConfig::load(run_config);
    if (run->count("--dataset") > 0) config.dataset_path = run_dataset;
    if (run->count("--classifier") > 0) {
      const auto kind = sdqc::parse_classifier(run_classifier);
      if (!kind)
        throw sdqc::Error(sdqc::ErrorCode::InvalidSpec,
                          "unknown classifier `" + run_classifier + "`");
      config.classifier = *kind;
    }
    if (run->count("--seed") > 0) {
      config.seed = run_seed;
      config.seed_set = true;
    }
    if (run_drop) config.drop_orphans = true;
    if (run_depth) config.depth_transitions = true;
    if (run->count("--out") > 0) config.output_dir = run_out;
    cmd_run(config);
  });

  // compare
  auto* compare = app.add_subcommand(
      "compare", "Compare completed runs side by side");
  std::vector<std::string> compare_dirs;
  std::string compare_out;
  compare->add_option("dirs", compare_dirs, "Run directories (two or more)")
      ->required();
  compare->add_option("--out", compare_out,
                      "Also write the comparison table to this path");
  compare->callback([&] {
    const std::string table = sdqc::compare_runs(compare_dirs);
    std::cout << table;
    if (!compare_out.empty()) sdqc::write_text_file(compare_out, table);
  });

  // inspect-tree
  auto* inspect = app.add_subcommand(
      "inspect-tree", "Pretty-print conversations with depths and labels");
  std::string inspect_path;
  std::string inspect_event;
  int inspect_tree = -1;
  bool inspect_drop = false;
  inspect->add_option("dataset", inspect_path, "Dataset JSON file")->required();
  inspect->add_option("--event", inspect_event, "Only this event");
  inspect->add_option("--tree", inspect_tree,
                      "Only this conversation index within each event");
  inspect->add_flag("--drop-orphans", inspect_drop,
                    "Drop replies whose parent is missing instead of failing");
  inspect->callback([&] {
    cmd_inspect(inspect_path, inspect_drop, inspect_event, inspect_tree);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const sdqc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
