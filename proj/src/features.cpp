#include "sdqc/features.hpp"

#include <array>
#include <cmath>
#include <fstream>

#include "sdqc/error.hpp"

namespace sdqc {

void FeatureLayout::add(const std::string& name, int width) {
  blocks_.push_back({name, width});
  total_width_ += width;
}

bool FeatureLayout::is_binary_block(const std::string& name) {
  static const std::set<std::string> kBinary = {
      "negation", "swear",   "question_mark", "exclamation_mark",
      "period",   "url",     "picture",       "is_source"};
  return kBinary.count(name) > 0;
}

std::vector<bool> FeatureLayout::binary_mask() const {
  std::vector<bool> mask;
  mask.reserve(total_width_);
  for (const Block& b : blocks_) {
    const bool binary = is_binary_block(b.name);
    for (int i = 0; i < b.width; ++i) mask.push_back(binary);
  }
  return mask;
}

bool FeatureLayout::operator==(const FeatureLayout& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].name != other.blocks_[i].name ||
        blocks_[i].width != other.blocks_[i].width) {
      return false;
    }
  }
  return true;
}

SwearLexicon SwearLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::LexiconMissing, path);
  }
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.insert(line);
  }
  return SwearLexicon(std::move(words));
}

int negation_flag(const TokenList& tokens) {
  static const std::set<std::string> kNegationWords = {
      "not",    "no",       "nobody",    "nothing",   "none",
      "never",  "neither",  "nor",       "nowhere",   "hardly",
      "scarcely", "barely", "don't",     "isn't",     "wasn't",
      "shouldn't", "wouldn't", "couldn't", "doesn't"};
  for (const std::string& word : tokens.normalized) {
    if (kNegationWords.count(word)) return 1;
  }
  return 0;
}

int swear_flag(const TokenList& tokens, const SwearLexicon& lexicon) {
  for (const std::string& word : tokens.normalized) {
    if (!word.empty() && lexicon.contains(word)) return 1;
  }
  return 0;
}

ContentFormatFeatures content_format_features(std::string_view text) {
  ContentFormatFeatures f{0, 0.0, 0};
  int alphabetic = 0, capitals = 0;
  for (unsigned char c : text) {
    if ((c & 0xc0) != 0x80) f.length++;  // skip UTF-8 continuation bytes
    if (c >= 'A' && c <= 'Z') {
      alphabetic++;
      capitals++;
    } else if (c >= 'a' && c <= 'z') {
      alphabetic++;
    }
  }
  f.capital_ratio =
      alphabetic > 0 ? static_cast<double>(capitals) / alphabetic : 0.0;
  f.word_count = static_cast<int>(tokenize(text).size());
  return f;
}

PunctuationFeatures punctuation_features(std::string_view text) {
  PunctuationFeatures f{0, 0, 0};
  for (char c : text) {
    if (c == '?') f.has_question = 1;
    if (c == '!') f.has_exclamation = 1;
    if (c == '.') f.has_period = 1;
  }
  return f;
}

TweetFormatFeatures tweet_format_features(const Tweet& tweet) {
  TweetFormatFeatures f{0, 0, 0};
  TokenList tokens = tokenize(tweet.text);
  for (const std::string& token : tokens.tokens) {
    if (is_url_token(token)) f.has_url = 1;
  }
  if (tweet.has_picture_metadata.has_value()) {
    f.has_picture = *tweet.has_picture_metadata ? 1 : 0;
  } else {
    // Text-pattern fallback on known image hosts.
    for (const std::string& token : tokens.tokens) {
      if (token.find("pic.twitter.com") != std::string::npos ||
          (is_url_token(token) && token.find("/photo/") != std::string::npos)) {
        f.has_picture = 1;
      }
    }
  }
  f.is_source = tweet.is_source() ? 1 : 0;
  return f;
}

FeatureExtractor::FeatureExtractor(const EmbeddingProvider* embeddings,
                                   const PosTagger* tagger,
                                   const SwearLexicon* lexicon,
                                   FeatureToggles toggles)
    : embeddings_(embeddings),
      tagger_(tagger),
      lexicon_(lexicon),
      toggles_(toggles),
      layout_(std::make_shared<FeatureLayout>()) {
  if (toggles_.lexicon) {
    layout_->add("embedding", embeddings_ ? embeddings_->dimension() : 0);
    layout_->add("pos_counts",
                 tagger_ ? static_cast<int>(tagger_->tagset().size()) : 0);
    layout_->add("negation", 1);
    layout_->add("swear", 1);
  }
  if (toggles_.content_formatting) {
    layout_->add("length", 1);
    layout_->add("capital_ratio", 1);
    layout_->add("word_count", 1);
  }
  if (toggles_.punctuation) {
    layout_->add("question_mark", 1);
    layout_->add("exclamation_mark", 1);
    layout_->add("period", 1);
  }
  if (toggles_.tweet_formatting) {
    layout_->add("url", 1);
    layout_->add("picture", 1);
    layout_->add("is_source", 1);
  }
}

std::vector<double> FeatureExtractor::extract(const Tweet& tweet) const {
  std::vector<double> out;
  out.reserve(layout_->total_width());
  const TokenList tokens = tokenize(tweet.text);

  if (toggles_.lexicon) {
    if (embeddings_) {
      std::vector<double> emb = average_embedding(tokens, *embeddings_);
      out.insert(out.end(), emb.begin(), emb.end());
    }
    if (tagger_) {
      for (int c : pos_counts(tokens, *tagger_, tweet.id)) {
        out.push_back(static_cast<double>(c));
      }
    }
    out.push_back(static_cast<double>(negation_flag(tokens)));
    if (!lexicon_) {
      throw Error(ErrorCode::LexiconMissing, "no swear lexicon configured");
    }
    out.push_back(static_cast<double>(swear_flag(tokens, *lexicon_)));
  }
  if (toggles_.content_formatting) {
    ContentFormatFeatures c = content_format_features(tweet.text);
    out.push_back(static_cast<double>(c.length));
    out.push_back(c.capital_ratio);
    out.push_back(static_cast<double>(c.word_count));
  }
  if (toggles_.punctuation) {
    PunctuationFeatures p = punctuation_features(tweet.text);
    out.push_back(static_cast<double>(p.has_question));
    out.push_back(static_cast<double>(p.has_exclamation));
    out.push_back(static_cast<double>(p.has_period));
  }
  if (toggles_.tweet_formatting) {
    TweetFormatFeatures t = tweet_format_features(tweet);
    out.push_back(static_cast<double>(t.has_url));
    out.push_back(static_cast<double>(t.has_picture));
    out.push_back(static_cast<double>(t.is_source));
  }
  return out;
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows,
                               const FeatureLayout& layout) {
  const int width = layout.total_width();
  Standardizer st;
  st.mean_.assign(width, 0.0);
  st.scale_.assign(width, 1.0);
  if (rows.empty()) return st;

  const std::vector<bool> binary = layout.binary_mask();
  const double n = static_cast<double>(rows.size());
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != width) {
      throw Error(ErrorCode::DimensionMismatch,
                  "feature row width " + std::to_string(row.size()) +
                      " vs layout " + std::to_string(width));
    }
    for (int c = 0; c < width; ++c) st.mean_[c] += row[c];
  }
  for (int c = 0; c < width; ++c) st.mean_[c] /= n;

  std::vector<double> var(width, 0.0);
  for (const auto& row : rows) {
    for (int c = 0; c < width; ++c) {
      const double d = row[c] - st.mean_[c];
      var[c] += d * d;
    }
  }
  for (int c = 0; c < width; ++c) {
    if (binary[c]) {
      st.mean_[c] = 0.0;
      st.scale_[c] = 1.0;
      continue;
    }
    var[c] /= n;
    st.scale_[c] = var[c] > 1e-12 ? std::sqrt(var[c]) : 1.0;
  }
  return st;
}

void Standardizer::apply(std::vector<double>& row) const {
  if (row.size() != mean_.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "row width " + std::to_string(row.size()) +
                    " vs standardizer " + std::to_string(mean_.size()));
  }
  for (std::size_t c = 0; c < row.size(); ++c) {
    row[c] = (row[c] - mean_[c]) / scale_[c];
  }
}

}  // namespace sdqc
