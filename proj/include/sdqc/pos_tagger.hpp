#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "sdqc/tokenize.hpp"

namespace sdqc {

// Tags every token with exactly one tag from a fixed, ordered tagset.
class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual const std::vector<std::string>& tagset() const = 0;
  // One tag index per token. `tweet_id` lets file-backed taggers look up
  // their annotations; the rule tagger ignores it.
  virtual std::vector<int> tag(const std::string& tweet_id,
                               const TokenList& tokens) const = 0;
};

// Count per tag in tagset order; the counts always sum to the token count.
std::vector<int> pos_counts(const TokenList& tokens, const PosTagger& tagger,
                            const std::string& tweet_id = "");

// Deterministic rule/lexicon tagger with a 12-tag set:
//   NOUN VERB ADJ ADV PRON DET PREP NUM PUNCT MENTION HASHTAG URL
// Conjunctions fall under PREP, unknown words default to NOUN.
class RulePosTagger : public PosTagger {
 public:
  RulePosTagger();
  const std::vector<std::string>& tagset() const override { return tagset_; }
  std::vector<int> tag(const std::string& tweet_id,
                       const TokenList& tokens) const override;

  int tag_index(const std::string& name) const;

 private:
  int tag_one(const std::string& raw, const std::string& normalized) const;

  std::vector<std::string> tagset_;
  std::unordered_map<std::string, int> lexicon_;
};

// Tagger backed by a sidecar annotation file: one line per tweet,
// `id TAB tag SP tag ...`, tags aligned to tokenizer output. The tagset is
// the sorted set of tags appearing in the file.
class SidecarPosTagger : public PosTagger {
 public:
  static SidecarPosTagger load(const std::string& path);

  const std::vector<std::string>& tagset() const override { return tagset_; }
  std::vector<int> tag(const std::string& tweet_id,
                       const TokenList& tokens) const override;

 private:
  std::vector<std::string> tagset_;
  std::unordered_map<std::string, std::vector<int>> by_tweet_;
};

}  // namespace sdqc
