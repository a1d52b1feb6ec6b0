#include "sdqc/dataset_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sdqc/error.hpp"
#include "sdqc/labels.hpp"

namespace sdqc {

namespace {

using nlohmann::json;
constexpr const char* kDatasetFormat = "sdqc-dataset/1";

Tweet parse_tweet(const json& record, const std::string& event_name) {
  Tweet tweet;
  tweet.id = record.at("id").get<std::string>();
  if (tweet.id.empty())
    throw Error(ErrorCode::SchemaViolation, "tweet with empty id");
  tweet.text = record.at("text").get<std::string>();
  tweet.event = event_name;
  if (record.contains("event")) {
    const auto event = record.at("event").get<std::string>();
    if (event != event_name)
      throw Error(ErrorCode::SchemaViolation,
                  "tweet " + tweet.id + " claims event `" + event +
                      "` inside event `" + event_name + "`");
  }
  if (record.contains("parent_id")) {
    tweet.parent_id = record.at("parent_id").get<std::string>();
    if (*tweet.parent_id == tweet.id)
      throw Error(ErrorCode::SchemaViolation,
                  "tweet " + tweet.id + " is its own parent");
  }
  if (record.contains("label")) {
    const auto name = record.at("label").get<std::string>();
    const auto label = parse_label(name);
    if (!label)
      throw Error(ErrorCode::SchemaViolation,
                  "tweet " + tweet.id + ": unknown label `" + name + "`");
    tweet.gold_label = *label;
  }
  if (record.contains("raw_annotation")) {
    const auto name = record.at("raw_annotation").get<std::string>();
    const auto kind = parse_raw_annotation(name);
    if (!kind)
      throw Error(ErrorCode::SchemaViolation,
                  "tweet " + tweet.id + ": unknown annotation `" + name + "`");
    tweet.raw_annotation = *kind;
  }
  if (record.contains("has_picture"))
    tweet.has_picture_metadata = record.at("has_picture").get<bool>();
  return tweet;
}

// Removes replies whose parent never made it into the conversation,
// cascading to their descendants.
std::size_t drop_orphan_replies(std::vector<Tweet>& tweets) {
  std::size_t dropped = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::unordered_set<std::string> present;
    for (const Tweet& t : tweets) present.insert(t.id);
    std::vector<Tweet> kept;
    kept.reserve(tweets.size());
    for (Tweet& t : tweets) {
      if (t.parent_id && !present.count(*t.parent_id)) {
        ++dropped;
        changed = true;
      } else {
        kept.push_back(std::move(t));
      }
    }
    tweets = std::move(kept);
  }
  return dropped;
}

RawAnnotation polarity_of(StanceLabel label) {
  return label == StanceLabel::Supporting ? RawAnnotation::SourceSupporting
                                          : RawAnnotation::SourceDenying;
}

// Explicit labels win; raw annotations must agree with them when both are
// present. Returns tweets in tree order with gold_label filled in wherever
// it can be derived.
void resolve_labels(ConversationTree& tree) {
  std::optional<StanceLabel> root_label;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Tweet& tweet = tree.node(i);
    std::optional<StanceLabel> derived;
    if (tweet.raw_annotation) {
      if (i == 0) {
        derived = convert_annotation(*tweet.raw_annotation, std::nullopt);
      } else {
        switch (*tweet.raw_annotation) {
          case RawAnnotation::AppealForMoreInfo:
          case RawAnnotation::Comment:
            // Pass-through kinds; the source polarity is irrelevant.
            derived = convert_annotation(RawAnnotation::SourceSupporting,
                                         *tweet.raw_annotation);
            break;
          case RawAnnotation::Agreed:
          case RawAnnotation::Disagreed:
            if (!root_label || (*root_label != StanceLabel::Supporting &&
                                *root_label != StanceLabel::Denying))
              throw Error(ErrorCode::SchemaViolation,
                          "tweet " + tweet.id +
                              ": agreed/disagreed needs a supporting or "
                              "denying source");
            derived = convert_annotation(polarity_of(*root_label),
                                          *tweet.raw_annotation);
            break;
          case RawAnnotation::SourceSupporting:
          case RawAnnotation::SourceDenying:
            throw Error(ErrorCode::IllegalCombination,
                        "tweet " + tweet.id +
                            ": source annotation on a reply");
        }
      }
    }
    std::optional<StanceLabel> resolved = tweet.gold_label;
    if (resolved && derived && *resolved != *derived)
      throw Error(ErrorCode::LabelConflict,
                  "tweet " + tweet.id + ": explicit label `" +
                      std::string(label_name(*resolved)) +
                      "` contradicts annotation-derived `" +
                      std::string(label_name(*derived)) + "`");
    if (!resolved) resolved = derived;
    tree.set_gold_label(i, resolved);
    if (i == 0) root_label = resolved;
  }
}

}  // namespace

RumourDataset parse_dataset(const std::string& text, const LoadOptions& options,
                            LoadSummary* summary) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("dataset is not valid JSON: ") + e.what());
  }
  LoadSummary local;
  RumourDataset dataset;
  try {
    if (j.at("format").get<std::string>() != kDatasetFormat)
      throw Error(ErrorCode::SchemaViolation, "unknown dataset format");
    const auto& events = j.at("events");
    if (!events.is_array() || events.empty())
      throw Error(ErrorCode::SchemaViolation, "dataset has no events");

    std::unordered_set<std::string> event_names;
    std::unordered_set<std::string> tweet_ids;
    for (const auto& event_json : events) {
      Event event;
      event.name = event_json.at("name").get<std::string>();
      if (event.name.empty())
        throw Error(ErrorCode::SchemaViolation, "event with empty name");
      if (!event_names.insert(event.name).second)
        throw Error(ErrorCode::SchemaViolation,
                    "duplicate event name `" + event.name + "`");
      for (const auto& conv_json : event_json.at("conversations")) {
        std::vector<Tweet> tweets;
        const auto& records = conv_json.at("tweets");
        if (!records.is_array() || records.empty())
          throw Error(ErrorCode::SchemaViolation, "conversation with no tweets");
        for (const auto& record : records) {
          Tweet tweet = parse_tweet(record, event.name);
          if (!tweet_ids.insert(tweet.id).second)
            throw Error(ErrorCode::SchemaViolation,
                        "duplicate tweet id " + tweet.id);
          tweets.push_back(std::move(tweet));
        }
        if (options.drop_orphans)
          local.dropped_orphans += drop_orphan_replies(tweets);
        if (tweets.empty())
          throw Error(ErrorCode::SchemaViolation,
                      "conversation emptied by orphan dropping");
        ConversationTree tree = ConversationTree::build(std::move(tweets));
        resolve_labels(tree);
        local.tweets += tree.size();
        local.conversations += 1;
        event.conversations.push_back(std::move(tree));
      }
      dataset.events.push_back(std::move(event));
      local.events += 1;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("malformed dataset: ") + e.what());
  }
  if (summary) *summary = local;
  return dataset;
}

RumourDataset load_dataset(const std::string& path, const LoadOptions& options,
                           LoadSummary* summary) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open dataset: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), options, summary);
}

std::string emit_dataset(const RumourDataset& dataset) {
  json events = json::array();
  for (const Event& event : dataset.events) {
    json conversations = json::array();
    for (const ConversationTree& tree : event.conversations) {
      json tweets = json::array();
      for (std::size_t i = 0; i < tree.size(); ++i) {
        const Tweet& tweet = tree.node(i);
        json record;
        record["id"] = tweet.id;
        record["text"] = tweet.text;
        record["event"] = tweet.event;
        if (tweet.parent_id) record["parent_id"] = *tweet.parent_id;
        if (tweet.gold_label)
          record["label"] = std::string(label_name(*tweet.gold_label));
        if (tweet.raw_annotation)
          record["raw_annotation"] =
              std::string(raw_annotation_name(*tweet.raw_annotation));
        if (tweet.has_picture_metadata)
          record["has_picture"] = *tweet.has_picture_metadata;
        tweets.push_back(std::move(record));
      }
      conversations.push_back(json{{"tweets", std::move(tweets)}});
    }
    events.push_back(
        json{{"name", event.name}, {"conversations", std::move(conversations)}});
  }
  json j;
  j["format"] = kDatasetFormat;
  j["events"] = std::move(events);
  return j.dump(2) + "\n";
}

std::string summarize_dataset(const RumourDataset& dataset) {
  std::ostringstream out;
  constexpr int kNameWidth = 20;
  out << std::left << std::setw(kNameWidth) << "event" << std::right;
  for (StanceLabel y : kLabelOrder) out << std::setw(12) << label_name(y);
  out << std::setw(12) << "unlabeled" << std::setw(8) << "total" << "\n";
  std::array<long long, kNumLabels> totals{};
  long long total_unlabeled = 0;
  long long grand_total = 0;
  for (const Event& event : dataset.events) {
    std::array<long long, kNumLabels> counts{};
    long long unlabeled = 0;
    long long total = 0;
    for (const ConversationTree& tree : event.conversations)
      for (std::size_t i = 0; i < tree.size(); ++i) {
        ++total;
        if (tree.node(i).gold_label)
          counts[label_index(*tree.node(i).gold_label)]++;
        else
          ++unlabeled;
      }
    out << std::left << std::setw(kNameWidth) << event.name << std::right;
    for (int y = 0; y < kNumLabels; ++y) {
      out << std::setw(12) << counts[y];
      totals[y] += counts[y];
    }
    out << std::setw(12) << unlabeled << std::setw(8) << total << "\n";
    total_unlabeled += unlabeled;
    grand_total += total;
  }
  out << std::left << std::setw(kNameWidth) << "TOTAL" << std::right;
  for (int y = 0; y < kNumLabels; ++y) out << std::setw(12) << totals[y];
  out << std::setw(12) << total_unlabeled << std::setw(8) << grand_total << "\n";
  return out.str();
}

std::string dataset_fingerprint(const RumourDataset& dataset) {
  const std::string canonical = emit_dataset(dataset);
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace sdqc
