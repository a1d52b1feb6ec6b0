#pragma once

#include <cstdint>
#include <string>

#include "sdqc/conversation.hpp"

namespace sdqc {

struct LoadOptions {
  // Drop replies whose parent is missing (plus their descendants) instead
  // of failing with OrphanReply; dropped counts land in the load summary.
  bool drop_orphans = false;
};

struct LoadSummary {
  std::size_t events = 0;
  std::size_t conversations = 0;
  std::size_t tweets = 0;
  std::size_t dropped_orphans = 0;
};

// Reads an sdqc-dataset/1 file, builds the conversation trees and resolves
// gold labels (explicit labels win; raw annotations are converted; a
// conflict between the two fails with LabelConflict).
RumourDataset load_dataset(const std::string& path, const LoadOptions& options = {},
                           LoadSummary* summary = nullptr);
RumourDataset parse_dataset(const std::string& text, const LoadOptions& options = {},
                            LoadSummary* summary = nullptr);

// Canonical serialization; parse_dataset(emit_dataset(d)) reproduces d.
std::string emit_dataset(const RumourDataset& dataset);

// Per-event class counts in a fixed-width text table, one row per event
// plus a totals row.
std::string summarize_dataset(const RumourDataset& dataset);

// FNV-1a over the canonical serialization; used to refuse cross-dataset
// run comparisons.
std::string dataset_fingerprint(const RumourDataset& dataset);

}  // namespace sdqc
