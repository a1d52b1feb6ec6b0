#include "sdqc/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sdqc/error.hpp"

namespace sdqc {

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return std::string(buf);
}

std::string render_report(const EvalReport& report, const std::string& classifier,
                          const std::vector<std::string>& extra_lines) {
  std::ostringstream out;
  out << "# format: sdqc-report/1\n";
  out << "classifier: " << classifier << "\n";
  out << "fold: " << (report.fold_id ? *report.fold_id : "aggregate") << "\n";
  out << "scored_tweets: " << report.confusion.total() << "\n";
  out << "micro_f1: " << format_score(report.micro_f1) << "\n";
  out << "macro_f1: " << format_score(report.macro_f1) << "\n";
  for (const std::string& line : extra_lines) out << line << "\n";

  out << "\nper-class:\n";
  out << std::left << std::setw(12) << "label" << std::right << std::setw(11)
      << "precision" << std::setw(11) << "recall" << std::setw(11) << "f1"
      << "\n";
  for (int y = 0; y < kNumLabels; ++y) {
    const ClassMetrics& m = report.per_class[y];
    out << std::left << std::setw(12) << label_name(kLabelOrder[y]) << std::right
        << std::setw(11) << format_score(m.precision) << std::setw(11)
        << format_score(m.recall) << std::setw(11) << format_score(m.f1) << "\n";
  }

  out << "\nconfusion (rows gold, columns predicted):\n";
  out << std::left << std::setw(12) << "" << std::right;
  for (StanceLabel y : kLabelOrder) out << std::setw(12) << label_name(y);
  out << "\n";
  for (int g = 0; g < kNumLabels; ++g) {
    out << std::left << std::setw(12) << label_name(kLabelOrder[g]) << std::right;
    for (int p = 0; p < kNumLabels; ++p)
      out << std::setw(12) << report.confusion.at(g, p);
    out << "\n";
  }

  if (!report.per_depth.empty()) {
    out << "\nper-depth:\n";
    out << std::left << std::setw(7) << "depth" << std::right << std::setw(11)
        << "micro_f1" << std::setw(11) << "macro_f1" << std::setw(10)
        << "support" << "\n";
    for (const auto& [bucket, score] : report.per_depth) {
      out << std::left << std::setw(7) << depth_bucket_name(bucket) << std::right
          << std::setw(11) << format_score(score.micro_f1) << std::setw(11)
          << format_score(score.macro_f1) << std::setw(10) << score.support
          << "\n";
    }
  }
  return out.str();
}

std::string confusion_tsv(const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "# format: sdqc-confusion/1\n";
  out << "gold\\predicted";
  for (StanceLabel y : kLabelOrder) out << '\t' << label_name(y);
  out << "\n";
  for (int g = 0; g < kNumLabels; ++g) {
    out << label_name(kLabelOrder[g]);
    for (int p = 0; p < kNumLabels; ++p) out << '\t' << cm.at(g, p);
    out << "\n";
  }
  return out.str();
}

std::string per_class_tsv(const std::array<ClassMetrics, kNumLabels>& per_class) {
  std::ostringstream out;
  out << "# format: sdqc-per-class/1\n";
  out << "label\tprecision\trecall\tf1\n";
  for (int y = 0; y < kNumLabels; ++y) {
    const ClassMetrics& m = per_class[y];
    out << label_name(kLabelOrder[y]) << '\t' << format_score(m.precision)
        << '\t' << format_score(m.recall) << '\t' << format_score(m.f1) << "\n";
  }
  return out.str();
}

std::string per_depth_tsv(const std::map<int, DepthBucketScore>& per_depth) {
  std::ostringstream out;
  out << "# format: sdqc-per-depth/1\n";
  out << "depth\tmicro_f1\tmacro_f1\tsupport\n";
  for (const auto& [bucket, score] : per_depth)
    out << depth_bucket_name(bucket) << '\t' << format_score(score.micro_f1)
        << '\t' << format_score(score.macro_f1) << '\t' << score.support << "\n";
  return out.str();
}

std::string metrics_tsv(const EvalReport& report) {
  std::ostringstream out;
  out << "# format: sdqc-metrics/1\n";
  out << "metric\tvalue\n";
  out << "micro_f1\t" << format_score(report.micro_f1) << "\n";
  out << "macro_f1\t" << format_score(report.macro_f1) << "\n";
  for (int y = 0; y < kNumLabels; ++y)
    out << "f1_" << label_name(kLabelOrder[y]) << '\t'
        << format_score(report.per_class[y].f1) << "\n";
  return out.str();
}

std::string predictions_tsv(const std::vector<std::vector<ScoredTweet>>& folds,
                            const std::vector<std::string>& fold_events) {
  std::ostringstream out;
  out << "# format: sdqc-predictions/1\n";
  out << "tweet_id\tevent\tdepth\tgold\tpredicted\n";
  for (std::size_t f = 0; f < folds.size(); ++f)
    for (const ScoredTweet& t : folds[f])
      out << t.tweet_id << '\t' << fold_events[f] << '\t' << t.depth << '\t'
          << label_short_name(t.gold) << '\t' << label_short_name(t.predicted)
          << "\n";
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  write_text_file(tmp, content);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw Error(ErrorCode::IoError,
                "cannot move " + tmp + " into place: " + ec.message());
}

}  // namespace sdqc
