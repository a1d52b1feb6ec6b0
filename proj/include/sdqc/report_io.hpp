#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdqc/evaluation.hpp"

namespace sdqc {

// Fixed 6-decimal rendering used by every report so reruns are
// byte-comparable.
std::string format_score(double value);

// Human-readable structured report. `classifier` names the row of Table-2
// style comparisons; extra lines (e.g. branch disagreement counts) are
// appended verbatim.
std::string render_report(const EvalReport& report, const std::string& classifier,
                          const std::vector<std::string>& extra_lines = {});

// Tab-separated tables, each versioned with a leading `# format:` comment.
std::string confusion_tsv(const ConfusionMatrix& cm);
std::string per_class_tsv(const std::array<ClassMetrics, kNumLabels>& per_class);
std::string per_depth_tsv(const std::map<int, DepthBucketScore>& per_depth);
std::string metrics_tsv(const EvalReport& report);
std::string predictions_tsv(const std::vector<std::vector<ScoredTweet>>& folds,
                            const std::vector<std::string>& fold_events);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
// Writes to `path + ".tmp"` then renames, so readers never see a partial
// file; used for the manifest which marks a run as complete.
void write_text_file_atomic(const std::string& path, const std::string& content);

}  // namespace sdqc
