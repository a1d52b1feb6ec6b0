#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace sdqc {

// The 4-way stance scheme. The order Supporting < Denying < Querying <
// Commenting is fixed everywhere: weight-matrix rows, confusion-matrix axes,
// tie-breaks and report columns all index by it.
enum class StanceLabel : int {
  Supporting = 0,
  Denying = 1,
  Querying = 2,
  Commenting = 3,
};

inline constexpr int kNumLabels = 4;

inline constexpr std::array<StanceLabel, kNumLabels> kLabelOrder = {
    StanceLabel::Supporting, StanceLabel::Denying, StanceLabel::Querying,
    StanceLabel::Commenting};

inline int label_index(StanceLabel y) { return static_cast<int>(y); }

// Long form used in dataset files and reports ("supporting", ...).
std::string_view label_name(StanceLabel y);
// Short form used in prediction files and Figure-1-style listings
// ("support", "deny", "query", "comment").
std::string_view label_short_name(StanceLabel y);

// Accepts both long and short forms, case-sensitive lowercase.
std::optional<StanceLabel> parse_label(std::string_view text);

// The original pairwise annotation scheme. Source kinds are only legal on the
// root of a conversation; the other four only on replies.
enum class RawAnnotation {
  SourceSupporting,
  SourceDenying,
  Agreed,
  Disagreed,
  AppealForMoreInfo,
  Comment,
};

std::string_view raw_annotation_name(RawAnnotation kind);
std::optional<RawAnnotation> parse_raw_annotation(std::string_view text);

// Converts a pairwise annotation into the 4-way scheme. For a source tweet
// pass reply_annotation = nullopt; the source polarity maps to
// Supporting/Denying. Replies: Querying/Commenting pass through; Agreed and
// Disagreed combine with the source polarity (agree with supporting source ->
// supporting, disagree with supporting -> denying, and flipped for denying
// sources). Throws IllegalCombination for annotations on the wrong side of
// the root/reply split.
StanceLabel convert_annotation(RawAnnotation source_annotation,
                               std::optional<RawAnnotation> reply_annotation);

}  // namespace sdqc
