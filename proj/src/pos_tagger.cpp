#include "sdqc/pos_tagger.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "sdqc/error.hpp"

namespace sdqc {

std::vector<int> pos_counts(const TokenList& tokens, const PosTagger& tagger,
                            const std::string& tweet_id) {
  std::vector<int> counts(tagger.tagset().size(), 0);
  for (int t : tagger.tag(tweet_id, tokens)) {
    counts[t]++;
  }
  return counts;
}

namespace {

enum Tag {
  kNoun = 0,
  kVerb,
  kAdj,
  kAdv,
  kPron,
  kDet,
  kPrep,
  kNum,
  kPunct,
  kMention,
  kHashtag,
  kUrl,
};

const char* const kTagNames[] = {"NOUN", "VERB", "ADJ",  "ADV",
                                 "PRON", "DET",  "PREP", "NUM",
                                 "PUNCT", "MENTION", "HASHTAG", "URL"};

const char* const kPronWords[] = {
    "i",       "you",     "he",      "she",     "it",       "we",
    "they",    "me",      "him",     "her",     "us",       "them",
    "my",      "your",    "his",     "its",     "our",      "their",
    "mine",    "yours",   "hers",    "ours",    "theirs",   "myself",
    "yourself", "himself", "herself", "itself",  "ourselves", "themselves",
    "who",     "whom",    "whose",   "which",   "what",     "someone",
    "anyone",  "everyone", "somebody", "anybody", "everybody", "something",
    "anything", "everything"};

const char* const kDetWords[] = {
    "the",  "a",     "an",      "this", "that",  "these", "those",
    "each", "every", "either",  "some", "any",   "no",    "all",
    "both", "few",   "many",    "much", "most",  "several", "such",
    "another", "other", "neither"};

// Prepositions plus conjunctions (folded under PREP).
const char* const kPrepWords[] = {
    "of",      "in",      "to",      "for",     "with",    "on",
    "at",      "by",      "from",    "up",      "about",   "into",
    "over",    "after",   "under",   "between", "out",     "against",
    "during",  "without", "before",  "around",  "among",   "through",
    "off",     "above",   "below",   "near",    "behind",  "beyond",
    "toward",  "towards", "via",     "per",     "within",  "despite",
    "until",   "till",    "since",   "and",     "or",      "but",
    "nor",     "so",      "yet",     "because", "although", "though",
    "while",   "if",      "unless",  "whereas", "than",    "as"};

const char* const kVerbWords[] = {
    "am",      "is",      "are",     "was",     "were",    "be",
    "been",    "being",   "have",    "has",     "had",     "having",
    "do",      "does",    "did",     "doing",   "done",    "will",
    "would",   "shall",   "should",  "can",     "could",   "may",
    "might",   "must",    "ought",   "get",     "got",     "gets",
    "go",      "goes",    "went",    "gone",    "say",     "says",
    "said",    "know",    "knows",   "knew",    "known",   "think",
    "thinks",  "thought", "believe", "believes", "take",   "takes",
    "took",    "taken",   "see",     "sees",    "saw",     "seen",
    "don't",   "doesn't", "didn't",  "isn't",   "aren't",  "wasn't",
    "weren't", "won't",   "wouldn't", "can't",  "couldn't", "shouldn't",
    "hasn't",  "haven't", "hadn't",  "i'm",     "i've",    "i'll"};

const char* const kAdvWords[] = {
    "not",     "very",    "too",       "also",     "just",     "now",
    "then",    "here",    "there",     "when",     "where",    "why",
    "how",     "again",   "once",      "soon",     "already",  "still",
    "never",   "always",  "often",     "sometimes", "really",  "quite",
    "rather",  "almost",  "apparently", "hopefully", "maybe",  "perhaps",
    "probably", "definitely", "actually", "however", "instead", "anyway",
    "well",    "even",    "yesterday", "today",    "tomorrow", "hardly",
    "scarcely", "barely", "nowhere",   "back",     "down"};

const char* const kAdjWords[] = {
    "good",  "bad",   "new",     "old",     "true",   "false",  "fake",
    "real",  "right", "wrong",   "big",     "small",  "great",  "little",
    "high",  "low",   "same",    "different", "next", "last",   "first",
    "best",  "worst", "sure",    "certain", "possible", "likely",
    "unlikely", "timid"};

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  bool digit = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = s[i];
    if (std::isdigit(c)) {
      digit = true;
    } else if (c == '.' || c == ',' || c == ':' || c == '/' || c == '%' ||
               (c == '-' && i == 0) || (c == '+' && i == 0)) {
      // separators and signs
    } else {
      return false;
    }
  }
  return digit;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         std::string_view(s).substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

RulePosTagger::RulePosTagger()
    : tagset_(std::begin(kTagNames), std::end(kTagNames)) {
  auto add = [&](const char* const* words, std::size_t n, int tag) {
    for (std::size_t i = 0; i < n; ++i) lexicon_.emplace(words[i], tag);
  };
  add(kPronWords, std::size(kPronWords), kPron);
  add(kDetWords, std::size(kDetWords), kDet);
  add(kPrepWords, std::size(kPrepWords), kPrep);
  add(kVerbWords, std::size(kVerbWords), kVerb);
  add(kAdvWords, std::size(kAdvWords), kAdv);
  add(kAdjWords, std::size(kAdjWords), kAdj);
}

int RulePosTagger::tag_index(const std::string& name) const {
  auto it = std::find(tagset_.begin(), tagset_.end(), name);
  return it == tagset_.end() ? -1 : static_cast<int>(it - tagset_.begin());
}

int RulePosTagger::tag_one(const std::string& raw,
                           const std::string& normalized) const {
  if (is_mention_token(raw)) return kMention;
  if (is_hashtag_token(raw)) return kHashtag;
  if (is_url_token(raw)) return kUrl;
  if (normalized.empty()) return kPunct;  // pure punctuation token
  if (is_number(normalized)) return kNum;
  auto it = lexicon_.find(normalized);
  if (it != lexicon_.end()) return it->second;
  if (ends_with(normalized, "ly")) return kAdv;
  if (normalized.size() >= 5 &&
      (ends_with(normalized, "ing") || ends_with(normalized, "ed"))) {
    return kVerb;
  }
  if (ends_with(normalized, "ous") || ends_with(normalized, "ful") ||
      ends_with(normalized, "ive") || ends_with(normalized, "able") ||
      ends_with(normalized, "ible") || ends_with(normalized, "less")) {
    return kAdj;
  }
  return kNoun;
}

std::vector<int> RulePosTagger::tag(const std::string& /*tweet_id*/,
                                    const TokenList& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(tag_one(tokens.tokens[i], tokens.normalized[i]));
  }
  return out;
}

SidecarPosTagger SidecarPosTagger::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open POS sidecar " + path);
  }
  std::unordered_map<std::string, std::vector<std::string>> raw;
  std::set<std::string> tags;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::MalformedLine,
                  path + ":" + std::to_string(lineno) + ": missing TAB");
    }
    std::string id = line.substr(0, tab);
    std::istringstream rest(line.substr(tab + 1));
    std::vector<std::string> tweet_tags;
    std::string tag;
    while (rest >> tag) {
      tags.insert(tag);
      tweet_tags.push_back(tag);
    }
    raw[std::move(id)] = std::move(tweet_tags);
  }

  SidecarPosTagger tagger;
  tagger.tagset_.assign(tags.begin(), tags.end());
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < tagger.tagset_.size(); ++i) {
    index[tagger.tagset_[i]] = static_cast<int>(i);
  }
  for (auto& [id, tweet_tags] : raw) {
    std::vector<int> ids;
    ids.reserve(tweet_tags.size());
    for (const std::string& t : tweet_tags) ids.push_back(index[t]);
    tagger.by_tweet_[id] = std::move(ids);
  }
  return tagger;
}

std::vector<int> SidecarPosTagger::tag(const std::string& tweet_id,
                                       const TokenList& tokens) const {
  auto it = by_tweet_.find(tweet_id);
  if (it == by_tweet_.end()) {
    throw Error(ErrorCode::MissingTweetId,
                "no POS annotation for tweet " + tweet_id);
  }
  if (it->second.size() != tokens.size()) {
    throw Error(ErrorCode::MalformedLine,
                "POS annotation for tweet " + tweet_id + " has " +
                    std::to_string(it->second.size()) + " tags for " +
                    std::to_string(tokens.size()) + " tokens");
  }
  return it->second;
}

}  // namespace sdqc
