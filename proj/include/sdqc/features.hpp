#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sdqc/conversation.hpp"
#include "sdqc/embeddings.hpp"
#include "sdqc/pos_tagger.hpp"
#include "sdqc/tokenize.hpp"

namespace sdqc {

// Ordered (block name, width) description of a concatenated feature vector.
class FeatureLayout {
 public:
  struct Block {
    std::string name;
    int width;
  };

  void add(const std::string& name, int width);
  int total_width() const { return total_width_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  // True for blocks whose columns are {0,1} flags and therefore skipped by
  // standardization.
  static bool is_binary_block(const std::string& name);

  // Per-column binary mask.
  std::vector<bool> binary_mask() const;

  bool operator==(const FeatureLayout& other) const;

 private:
  std::vector<Block> blocks_;
  int total_width_ = 0;
};

struct FeatureVector {
  std::vector<double> values;
  std::shared_ptr<const FeatureLayout> layout;
};

// Swear-word lexicon: UTF-8, one lowercase word per line, '#' comments.
class SwearLexicon {
 public:
  SwearLexicon() = default;
  explicit SwearLexicon(std::set<std::string> words) : words_(std::move(words)) {}
  static SwearLexicon load(const std::string& path);

  bool contains(const std::string& word) const { return words_.count(word) > 0; }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;
};

// 1 iff any normalized token is one of the 19 negation words.
int negation_flag(const TokenList& tokens);

// 1 iff any normalized token is in the lexicon.
int swear_flag(const TokenList& tokens, const SwearLexicon& lexicon);

struct ContentFormatFeatures {
  int length;           // characters (code points) in the raw text
  double capital_ratio; // capitals over alphabetic characters, 0 if none
  int word_count;       // whitespace-separated tokens
};
ContentFormatFeatures content_format_features(std::string_view text);

struct PunctuationFeatures {
  int has_question;
  int has_exclamation;
  int has_period;
};
PunctuationFeatures punctuation_features(std::string_view text);

struct TweetFormatFeatures {
  int has_url;
  int has_picture;
  int is_source;
};
TweetFormatFeatures tweet_format_features(const Tweet& tweet);

// Per-family feature toggles (family 1 = lexicon: embeddings, POS counts,
// negation, swear).
struct FeatureToggles {
  bool lexicon = true;
  bool content_formatting = true;
  bool punctuation = true;
  bool tweet_formatting = true;
};

// Bundles the fold-level providers and produces the concatenated raw
// (unstandardized) feature vector in the fixed layout order:
// [embedding | pos | negation | swear | length | capital_ratio | word_count
//  | ? | ! | . | url | picture | is_source]
class FeatureExtractor {
 public:
  FeatureExtractor(const EmbeddingProvider* embeddings,
                   const PosTagger* tagger, const SwearLexicon* lexicon,
                   FeatureToggles toggles = {});

  const FeatureLayout& layout() const { return *layout_; }
  std::shared_ptr<const FeatureLayout> layout_ptr() const { return layout_; }

  std::vector<double> extract(const Tweet& tweet) const;

 private:
  const EmbeddingProvider* embeddings_;
  const PosTagger* tagger_;
  const SwearLexicon* lexicon_;
  FeatureToggles toggles_;
  std::shared_ptr<FeatureLayout> layout_;
};

// Z-scores non-binary columns with statistics fit on the training fold only.
// Constant columns are centered but not scaled.
class Standardizer {
 public:
  static Standardizer fit(const std::vector<std::vector<double>>& rows,
                          const FeatureLayout& layout);

  void apply(std::vector<double>& row) const;
  std::vector<double> applied(std::vector<double> row) const {
    apply(row);
    return row;
  }

  const std::vector<double>& means() const { return mean_; }
  const std::vector<double>& scales() const { return scale_; }

 private:
  std::vector<double> mean_;   // 0 for binary columns
  std::vector<double> scale_;  // 1 for binary and constant columns
};

}  // namespace sdqc
