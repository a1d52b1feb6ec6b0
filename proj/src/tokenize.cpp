#include "sdqc/tokenize.hpp"

#include <array>
#include <cctype>

namespace sdqc {

namespace {

// Returns the byte length of the whitespace sequence starting at position i,
// or 0 if text[i] does not start one. Covers ASCII whitespace plus the
// common Unicode space code points seen in tweets.
std::size_t whitespace_len(std::string_view text, std::size_t i) {
  unsigned char c = text[i];
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
    return 1;
  }
  auto has = [&](std::string_view seq) {
    return text.size() - i >= seq.size() && text.substr(i, seq.size()) == seq;
  };
  if (has("\xc2\xa0")) return 2;    // U+00A0 no-break space
  if (has("\xe1\x9a\x80")) return 3;  // U+1680
  if (c == 0xe2 && text.size() - i >= 3) {
    unsigned char c1 = text[i + 1], c2 = text[i + 2];
    if (c1 == 0x80 && ((c2 >= 0x80 && c2 <= 0x8a) || c2 == 0xa8 || c2 == 0xa9 ||
                       c2 == 0xaf)) {
      return 3;  // U+2000..U+200A, U+2028, U+2029, U+202F
    }
    if (c1 == 0x81 && c2 == 0x9f) return 3;  // U+205F
  }
  if (has("\xe3\x80\x80")) return 3;  // U+3000 ideographic space
  return 0;
}

// Multi-byte punctuation stripped from token edges in the normalized form.
constexpr std::array<std::string_view, 9> kWidePunct = {
    "\xe2\x80\x98", "\xe2\x80\x99", "\xe2\x80\x9c",
    "\xe2\x80\x9d", "\xe2\x80\xa6", "\xe2\x80\x93",
    "\xe2\x80\x94", "\xc2\xa1",     "\xc2\xbf"};

std::size_t leading_punct_len(std::string_view s) {
  if (s.empty()) return 0;
  unsigned char c = s[0];
  if (c < 0x80 && std::ispunct(c)) return 1;
  for (std::string_view p : kWidePunct) {
    if (s.substr(0, p.size()) == p) return p.size();
  }
  return 0;
}

std::size_t trailing_punct_len(std::string_view s) {
  if (s.empty()) return 0;
  unsigned char c = s.back();
  if (c < 0x80 && std::ispunct(c)) return 1;
  for (std::string_view p : kWidePunct) {
    if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) {
      return p.size();
    }
  }
  return 0;
}

std::string lowercase_ascii(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    // Map U+2019 (curly apostrophe) to ASCII so "don't" variants agree.
    if (s.size() - i >= 3 && s.substr(i, 3) == "\xe2\x80\x99") {
      out.push_back('\'');
      i += 3;
      continue;
    }
    char c = s[i++];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

std::string_view strip_trailing(std::string_view s) {
  for (std::size_t n = trailing_punct_len(s); n != 0; n = trailing_punct_len(s)) {
    s.remove_suffix(n);
  }
  return s;
}

std::string_view strip_both(std::string_view s) {
  for (std::size_t n = leading_punct_len(s); n != 0; n = leading_punct_len(s)) {
    s.remove_prefix(n);
  }
  return strip_trailing(s);
}

}  // namespace

bool is_mention_token(std::string_view token) {
  return token.size() > 1 && token[0] == '@';
}

bool is_hashtag_token(std::string_view token) {
  return token.size() > 1 && token[0] == '#';
}

bool is_url_token(std::string_view token) {
  return token.substr(0, 7) == "http://" || token.substr(0, 8) == "https://";
}

std::string normalize_token(std::string_view token) {
  if (is_url_token(token)) {
    return lowercase_ascii(token);
  }
  if (is_mention_token(token) || is_hashtag_token(token)) {
    return lowercase_ascii(strip_trailing(token));
  }
  return lowercase_ascii(strip_both(token));
}

TokenList tokenize(std::string_view text) {
  TokenList out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t ws = whitespace_len(text, i);
    if (ws > 0) {
      i += ws;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && whitespace_len(text, i) == 0) ++i;
    std::string_view token = text.substr(start, i - start);
    out.tokens.emplace_back(token);
    out.normalized.push_back(normalize_token(token));
  }
  return out;
}

}  // namespace sdqc
