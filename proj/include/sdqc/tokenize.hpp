#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sdqc {

// Output of the single canonical tokenizer. `tokens` are the raw
// whitespace-separated pieces; `normalized` is the parallel lowercased form
// used for lexicon and embedding lookups (edge punctuation stripped, curly
// apostrophes mapped to ASCII). A normalized entry may be empty when the
// token was pure punctuation.
struct TokenList {
  std::vector<std::string> tokens;
  std::vector<std::string> normalized;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Splits on Unicode whitespace. @mentions, #hashtags and URLs survive as
// single tokens; their normalized forms keep the sigil / scheme.
TokenList tokenize(std::string_view text);

// Normalization applied to a single token (exposed for lexicon loading).
std::string normalize_token(std::string_view token);

bool is_mention_token(std::string_view token);
bool is_hashtag_token(std::string_view token);
bool is_url_token(std::string_view token);

}  // namespace sdqc
