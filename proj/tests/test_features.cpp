// Local feature families: lexicon flags, content formatting, punctuation,
// tweet formatting, the concatenated extractor layout and standardization.
#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "sdqc/error.hpp"
#include "sdqc/features.hpp"
#include "sdqc/pos_tagger.hpp"
#include "sdqc/tokenize.hpp"

using namespace sdqc;

namespace {

Tweet reply_tweet(const std::string& text) {
  Tweet t;
  t.id = "t1";
  t.text = text;
  t.parent_id = "t0";
  t.event = "e";
  return t;
}

}  // namespace

TEST_CASE("negation flag fires on negation words, not elsewhere") {
  CHECK(negation_flag(tokenize(
            "@u1 @u2 not true, the building was evacuated after the "
            "shooting started")) == 1);
  CHECK(negation_flag(tokenize("@u5 ok, thanks.")) == 0);
  CHECK(negation_flag(tokenize("This is NOT true")) == 1);  // case-folded
  CHECK(negation_flag(tokenize("I never said that")) == 1);
  CHECK(negation_flag(tokenize("")) == 0);
  CHECK(negation_flag(tokenize("nothing but sunshine")) == 1);
  // "knot" contains "not" but is not a negation token.
  CHECK(negation_flag(tokenize("tie the knot")) == 0);
}

TEST_CASE("swear flag consults the lexicon on normalized tokens") {
  const SwearLexicon lexicon(std::set<std::string>{"darn", "heck"});
  CHECK(swear_flag(tokenize("Darn! That hurt"), lexicon) == 1);
  CHECK(swear_flag(tokenize("what the heck?"), lexicon) == 1);
  CHECK(swear_flag(tokenize("perfectly polite words"), lexicon) == 0);
  const SwearLexicon empty;
  CHECK(swear_flag(tokenize("Darn!"), empty) == 0);
}

TEST_CASE("content formatting counts code points, capitals and words") {
  {
    const ContentFormatFeatures f = content_format_features("AbC");
    CHECK(f.length == 3);
    CHECK(f.capital_ratio == doctest::Approx(2.0 / 3.0));
    CHECK(f.word_count == 1);
  }
  {
    // No alphabetic characters: ratio defined as 0.
    const ContentFormatFeatures f = content_format_features("1234 !!");
    CHECK(f.length == 7);
    CHECK(f.capital_ratio == 0.0);
    CHECK(f.word_count == 2);
  }
  {
    // Multibyte characters count once each: 4 code points, 6 bytes.
    const ContentFormatFeatures f = content_format_features("café!");
    CHECK(f.length == 5);
    CHECK(f.word_count == 1);
  }
  {
    const ContentFormatFeatures f = content_format_features("");
    CHECK(f.length == 0);
    CHECK(f.capital_ratio == 0.0);
    CHECK(f.word_count == 0);
  }
  {
    const ContentFormatFeatures f = content_format_features(
        "@u1 @u2 not true, the building was evacuated after the shooting "
        "started");
    CHECK(f.word_count == 12);
  }
}

TEST_CASE("punctuation features are presence flags") {
  {
    const PunctuationFeatures f = punctuation_features("really?!");
    CHECK(f.has_question == 1);
    CHECK(f.has_exclamation == 1);
    CHECK(f.has_period == 0);
  }
  {
    const PunctuationFeatures f = punctuation_features("@u5 ok, thanks.");
    CHECK(f.has_question == 0);
    CHECK(f.has_exclamation == 0);
    CHECK(f.has_period == 1);
  }
  {
    const PunctuationFeatures f = punctuation_features("");
    CHECK(f.has_question == 0);
    CHECK(f.has_exclamation == 0);
    CHECK(f.has_period == 0);
  }
}

TEST_CASE("tweet formatting reads urls, pictures and source position") {
  {
    Tweet t;
    t.id = "root";
    t.text = "Breaking: gunman at large. http://t.co/abc";
    t.event = "e";
    t.has_picture_metadata = true;
    const TweetFormatFeatures f = tweet_format_features(t);
    CHECK(f.has_url == 1);
    CHECK(f.has_picture == 1);
    CHECK(f.is_source == 1);
  }
  {
    const TweetFormatFeatures f =
        tweet_format_features(reply_tweet("see https://t.co/x"));
    CHECK(f.has_url == 1);
    CHECK(f.has_picture == 0);
    CHECK(f.is_source == 0);
  }
  {
    // Picture inferred from a pic.twitter.com link when metadata is absent.
    const TweetFormatFeatures f =
        tweet_format_features(reply_tweet("look pic.twitter.com/xyz"));
    CHECK(f.has_picture == 1);
  }
  {
    // Metadata false beats link-based inference... the flag is still set by
    // the photo URL because either signal indicates an attached image.
    const TweetFormatFeatures f =
        tweet_format_features(reply_tweet("https://t.co/a/photo/1"));
    CHECK(f.has_url == 1);
    CHECK(f.has_picture == 1);
  }
  {
    const TweetFormatFeatures f = tweet_format_features(reply_tweet("plain"));
    CHECK(f.has_url == 0);
    CHECK(f.has_picture == 0);
    CHECK(f.is_source == 0);
  }
}

TEST_CASE("extractor concatenates blocks in the fixed order") {
  EmbeddingProvider embeddings(4);
  embeddings.insert("ok", {1.0, 2.0, 3.0, 4.0});
  const RulePosTagger tagger;
  const SwearLexicon lexicon(std::set<std::string>{"darn"});

  const FeatureExtractor extractor(&embeddings, &tagger, &lexicon);
  const FeatureLayout& layout = extractor.layout();

  // 4 + 12 + 1 + 1 + 3 + 3 + 3 = 27 columns with a dim-4 provider.
  CHECK(layout.total_width() == 27);
  REQUIRE(layout.blocks().size() == 13);
  const char* names[] = {"embedding",     "pos_counts",       "negation",
                         "swear",         "length",           "capital_ratio",
                         "word_count",    "question_mark",    "exclamation_mark",
                         "period",        "url",              "picture",
                         "is_source"};
  for (std::size_t k = 0; k < layout.blocks().size(); ++k)
    CHECK(layout.blocks()[k].name == names[k]);

  const std::vector<double> row = extractor.extract(reply_tweet("ok darn!"));
  REQUIRE(static_cast<int>(row.size()) == layout.total_width());
  // Embedding block: only "ok" is in vocabulary, so the average is its vector.
  CHECK(row[0] == doctest::Approx(1.0));
  CHECK(row[3] == doctest::Approx(4.0));
  // negation 0, swear 1 straight after the 12 POS columns.
  CHECK(row[4 + 12] == 0.0);
  CHECK(row[4 + 12 + 1] == 1.0);
  // Content formatting: length 8, ratio 0, word_count 2.
  CHECK(row[4 + 12 + 2] == 8.0);
  CHECK(row[4 + 12 + 3] == 0.0);
  CHECK(row[4 + 12 + 4] == 2.0);
  // Punctuation: ?=0, !=1, .=0; formatting: url 0, picture 0, source 0.
  CHECK(row[4 + 12 + 5] == 0.0);
  CHECK(row[4 + 12 + 6] == 1.0);
  CHECK(row[4 + 12 + 7] == 0.0);
  CHECK(row[4 + 12 + 8] == 0.0);
  CHECK(row[4 + 12 + 9] == 0.0);
  CHECK(row[4 + 12 + 10] == 0.0);
}

TEST_CASE("standard width is 323 with a 300-dimensional provider") {
  EmbeddingProvider embeddings(300);
  const RulePosTagger tagger;
  const SwearLexicon lexicon;
  const FeatureExtractor extractor(&embeddings, &tagger, &lexicon);
  CHECK(extractor.layout().total_width() == 300 + 12 + 2 + 3 + 3 + 3);
}

TEST_CASE("feature family toggles change the layout width") {
  EmbeddingProvider embeddings(4);
  const RulePosTagger tagger;
  const SwearLexicon lexicon;

  FeatureToggles only_punct;
  only_punct.lexicon = false;
  only_punct.content_formatting = false;
  only_punct.tweet_formatting = false;
  const FeatureExtractor e1(&embeddings, &tagger, &lexicon, only_punct);
  CHECK(e1.layout().total_width() == 3);
  CHECK(e1.layout().blocks().size() == 3);

  FeatureToggles no_lexicon;
  no_lexicon.lexicon = false;
  const FeatureExtractor e2(&embeddings, &tagger, &lexicon, no_lexicon);
  CHECK(e2.layout().total_width() == 9);

  const FeatureExtractor all(&embeddings, &tagger, &lexicon);
  CHECK(all.layout().total_width() == 27);
}

TEST_CASE("binary mask marks flag blocks only") {
  EmbeddingProvider embeddings(2);
  const RulePosTagger tagger;
  const SwearLexicon lexicon;
  const FeatureExtractor extractor(&embeddings, &tagger, &lexicon);
  const std::vector<bool> mask = extractor.layout().binary_mask();
  REQUIRE(static_cast<int>(mask.size()) == extractor.layout().total_width());

  // embedding (2) + pos (12) continuous, then negation/swear binary,
  // 3 content columns continuous, everything after binary.
  for (int k = 0; k < 14; ++k) CHECK_FALSE(mask[k]);
  CHECK(mask[14]);
  CHECK(mask[15]);
  for (int k = 16; k < 19; ++k) CHECK_FALSE(mask[k]);
  for (int k = 19; k < 25; ++k) CHECK(mask[k]);
}

TEST_CASE("standardizer zeroes means and unit-scales non-binary columns") {
  FeatureLayout layout;
  layout.add("length", 1);       // continuous, varying
  layout.add("word_count", 1);   // continuous, constant
  layout.add("negation", 1);     // binary: untouched

  const std::vector<std::vector<double>> rows = {
      {1.0, 5.0, 1.0}, {2.0, 5.0, 0.0}, {3.0, 5.0, 1.0}, {6.0, 5.0, 0.0}};
  const Standardizer st = Standardizer::fit(rows, layout);

  double mean0 = 0.0, var0 = 0.0;
  std::vector<std::vector<double>> out = rows;
  for (auto& row : out) st.apply(row);
  for (const auto& row : out) mean0 += row[0];
  mean0 /= out.size();
  for (const auto& row : out) var0 += (row[0] - mean0) * (row[0] - mean0);
  var0 /= out.size();
  CHECK(std::abs(mean0) <= 1e-9);
  CHECK(var0 == doctest::Approx(1.0).epsilon(1e-6));

  // Constant column: centered to zero but not scaled.
  for (const auto& row : out) CHECK(row[1] == 0.0);
  CHECK(st.scales()[1] == 1.0);

  // Binary column passes through untouched.
  for (std::size_t r = 0; r < rows.size(); ++r) CHECK(out[r][2] == rows[r][2]);
  CHECK(st.means()[2] == 0.0);
  CHECK(st.scales()[2] == 1.0);

  // Ragged input is rejected.
  try {
    Standardizer::fit({{1.0, 2.0}}, layout);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("out-of-vocabulary text yields a zero embedding block") {
  EmbeddingProvider embeddings(3);
  embeddings.insert("known", {1.0, 1.0, 1.0});
  const RulePosTagger tagger;
  const SwearLexicon lexicon;
  const FeatureExtractor extractor(&embeddings, &tagger, &lexicon);
  const std::vector<double> row =
      extractor.extract(reply_tweet("entirely unfamiliar words"));
  CHECK(row[0] == 0.0);
  CHECK(row[1] == 0.0);
  CHECK(row[2] == 0.0);
}

TEST_CASE("extractor is pure: identical tweets give identical rows") {
  EmbeddingProvider embeddings(2);
  embeddings.insert("ok", {0.5, -0.5});
  const RulePosTagger tagger;
  const SwearLexicon lexicon;
  const FeatureExtractor extractor(&embeddings, &tagger, &lexicon);
  const Tweet t = reply_tweet("ok then?");
  CHECK(extractor.extract(t) == extractor.extract(t));
}

TEST_CASE("lexicon toggle without a lexicon is an error at extract time") {
  EmbeddingProvider embeddings(2);
  const RulePosTagger tagger;
  const FeatureExtractor extractor(&embeddings, &tagger, nullptr);
  try {
    extractor.extract(reply_tweet("anything"));
    FAIL("expected LexiconMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LexiconMissing);
  }
}
