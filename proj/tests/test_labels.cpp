// Stance-label names, parsing and the pairwise-annotation conversion table.
#include <doctest.h>

#include "sdqc/error.hpp"
#include "sdqc/labels.hpp"

using namespace sdqc;

TEST_CASE("label names and both parse forms round-trip") {
  CHECK(label_name(StanceLabel::Supporting) == "supporting");
  CHECK(label_name(StanceLabel::Denying) == "denying");
  CHECK(label_name(StanceLabel::Querying) == "querying");
  CHECK(label_name(StanceLabel::Commenting) == "commenting");

  CHECK(label_short_name(StanceLabel::Supporting) == "support");
  CHECK(label_short_name(StanceLabel::Denying) == "deny");
  CHECK(label_short_name(StanceLabel::Querying) == "query");
  CHECK(label_short_name(StanceLabel::Commenting) == "comment");

  for (StanceLabel y : kLabelOrder) {
    CHECK(parse_label(label_name(y)) == y);
    CHECK(parse_label(label_short_name(y)) == y);
  }
  CHECK_FALSE(parse_label("Supporting").has_value());  // case-sensitive
  CHECK_FALSE(parse_label("").has_value());
  CHECK_FALSE(parse_label("agree").has_value());
}

TEST_CASE("fixed label order drives indexing") {
  CHECK(label_index(StanceLabel::Supporting) == 0);
  CHECK(label_index(StanceLabel::Denying) == 1);
  CHECK(label_index(StanceLabel::Querying) == 2);
  CHECK(label_index(StanceLabel::Commenting) == 3);
  for (int k = 0; k < kNumLabels; ++k) CHECK(label_index(kLabelOrder[k]) == k);
}

TEST_CASE("raw annotation names round-trip") {
  const RawAnnotation kinds[] = {
      RawAnnotation::SourceSupporting, RawAnnotation::SourceDenying,
      RawAnnotation::Agreed,           RawAnnotation::Disagreed,
      RawAnnotation::AppealForMoreInfo, RawAnnotation::Comment};
  for (RawAnnotation kind : kinds)
    CHECK(parse_raw_annotation(raw_annotation_name(kind)) == kind);
  CHECK(raw_annotation_name(RawAnnotation::SourceSupporting) ==
        "source-supporting");
  CHECK(raw_annotation_name(RawAnnotation::AppealForMoreInfo) ==
        "appeal-for-more-information");
  CHECK_FALSE(parse_raw_annotation("question").has_value());
}

TEST_CASE("annotation conversion covers all ten legal combinations") {
  using RA = RawAnnotation;
  // Source tweets: polarity passes through.
  CHECK(convert_annotation(RA::SourceSupporting, std::nullopt) ==
        StanceLabel::Supporting);
  CHECK(convert_annotation(RA::SourceDenying, std::nullopt) ==
        StanceLabel::Denying);
  // Replies under a supporting source.
  CHECK(convert_annotation(RA::SourceSupporting, RA::Agreed) ==
        StanceLabel::Supporting);
  CHECK(convert_annotation(RA::SourceSupporting, RA::Disagreed) ==
        StanceLabel::Denying);
  CHECK(convert_annotation(RA::SourceSupporting, RA::AppealForMoreInfo) ==
        StanceLabel::Querying);
  CHECK(convert_annotation(RA::SourceSupporting, RA::Comment) ==
        StanceLabel::Commenting);
  // Replies under a denying source: agree/disagree flip polarity.
  CHECK(convert_annotation(RA::SourceDenying, RA::Agreed) ==
        StanceLabel::Denying);
  CHECK(convert_annotation(RA::SourceDenying, RA::Disagreed) ==
        StanceLabel::Supporting);
  CHECK(convert_annotation(RA::SourceDenying, RA::AppealForMoreInfo) ==
        StanceLabel::Querying);
  CHECK(convert_annotation(RA::SourceDenying, RA::Comment) ==
        StanceLabel::Commenting);
}

TEST_CASE("annotations on the wrong side of the root split are illegal") {
  using RA = RawAnnotation;
  auto expect_illegal = [](RawAnnotation src,
                           std::optional<RawAnnotation> reply) {
    try {
      convert_annotation(src, reply);
      FAIL("expected IllegalCombination");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IllegalCombination);
    }
  };
  // Reply kinds used as the source annotation.
  expect_illegal(RA::Agreed, std::nullopt);
  expect_illegal(RA::Disagreed, RA::Comment);
  expect_illegal(RA::AppealForMoreInfo, std::nullopt);
  expect_illegal(RA::Comment, RA::Agreed);
  // Source kinds used as a reply annotation.
  expect_illegal(RA::SourceSupporting, RA::SourceSupporting);
  expect_illegal(RA::SourceDenying, RA::SourceDenying);
  expect_illegal(RA::SourceSupporting, RA::SourceDenying);
}
