#include "sdqc/labels.hpp"

#include "sdqc/error.hpp"

namespace sdqc {

std::string_view label_name(StanceLabel y) {
  switch (y) {
    case StanceLabel::Supporting: return "supporting";
    case StanceLabel::Denying: return "denying";
    case StanceLabel::Querying: return "querying";
    case StanceLabel::Commenting: return "commenting";
  }
  return "?";
}

std::string_view label_short_name(StanceLabel y) {
  switch (y) {
    case StanceLabel::Supporting: return "support";
    case StanceLabel::Denying: return "deny";
    case StanceLabel::Querying: return "query";
    case StanceLabel::Commenting: return "comment";
  }
  return "?";
}

std::optional<StanceLabel> parse_label(std::string_view text) {
  for (StanceLabel y : kLabelOrder) {
    if (text == label_name(y) || text == label_short_name(y)) return y;
  }
  return std::nullopt;
}

std::string_view raw_annotation_name(RawAnnotation kind) {
  switch (kind) {
    case RawAnnotation::SourceSupporting: return "source-supporting";
    case RawAnnotation::SourceDenying: return "source-denying";
    case RawAnnotation::Agreed: return "agreed";
    case RawAnnotation::Disagreed: return "disagreed";
    case RawAnnotation::AppealForMoreInfo: return "appeal-for-more-information";
    case RawAnnotation::Comment: return "comment";
  }
  return "?";
}

std::optional<RawAnnotation> parse_raw_annotation(std::string_view text) {
  for (RawAnnotation kind :
       {RawAnnotation::SourceSupporting, RawAnnotation::SourceDenying,
        RawAnnotation::Agreed, RawAnnotation::Disagreed,
        RawAnnotation::AppealForMoreInfo, RawAnnotation::Comment}) {
    if (text == raw_annotation_name(kind)) return kind;
  }
  return std::nullopt;
}

namespace {

bool is_source_kind(RawAnnotation kind) {
  return kind == RawAnnotation::SourceSupporting ||
         kind == RawAnnotation::SourceDenying;
}

}  // namespace

StanceLabel convert_annotation(RawAnnotation source_annotation,
                               std::optional<RawAnnotation> reply_annotation) {
  if (!is_source_kind(source_annotation)) {
    throw Error(ErrorCode::IllegalCombination,
                std::string(raw_annotation_name(source_annotation)) +
                    " is not a source annotation");
  }
  const bool source_supports =
      source_annotation == RawAnnotation::SourceSupporting;
  if (!reply_annotation.has_value()) {
    // The tweet is the source itself.
    return source_supports ? StanceLabel::Supporting : StanceLabel::Denying;
  }
  switch (*reply_annotation) {
    case RawAnnotation::Agreed:
      return source_supports ? StanceLabel::Supporting : StanceLabel::Denying;
    case RawAnnotation::Disagreed:
      return source_supports ? StanceLabel::Denying : StanceLabel::Supporting;
    case RawAnnotation::AppealForMoreInfo:
      return StanceLabel::Querying;
    case RawAnnotation::Comment:
      return StanceLabel::Commenting;
    case RawAnnotation::SourceSupporting:
    case RawAnnotation::SourceDenying:
      throw Error(ErrorCode::IllegalCombination,
                  "source annotation on a reply tweet");
  }
  throw Error(ErrorCode::IllegalCombination, "unreachable annotation kind");
}

}  // namespace sdqc
