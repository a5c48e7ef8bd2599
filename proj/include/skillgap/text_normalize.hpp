#pragma once

// Text cleaning pipeline: lowercase, tokenise, strip punctuation, drop stop
// words, and slide fixed-width n-gram windows over the result.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillgap/error.hpp"

namespace skillgap {

struct TokenStream {
  std::vector<std::string> tokens;
  std::size_t source_len = 0;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

/// Characters allowed inside a token ("c#", "c++", "asp.net", "ci/cd",
/// "spring-boot").
inline bool is_protected_char(char c) {
  return c == '#' || c == '+' || c == '.' || c == '/' || c == '-';
}

/// Bytes >= 0x80 are treated as word characters so UTF-8 sequences survive
/// intact; only ASCII letters are case-folded.
inline bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

inline bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space_char(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space_char(s.back())) s.remove_suffix(1);
  return s;
}

namespace detail {

// A cleaned token starts with a word character and ends with a word
// character or one of '#', '+'; everything between is a word character or
// protected punctuation.
inline std::string clean_token(std::string_view raw) {
  std::size_t first = 0;
  while (first < raw.size() && !is_word_char(raw[first])) ++first;
  std::size_t last = raw.size();
  while (last > first && !is_word_char(raw[last - 1]) && raw[last - 1] != '#' && raw[last - 1] != '+') --last;
  std::string out;
  out.reserve(last - first);
  for (std::size_t i = first; i < last; ++i) {
    const char c = raw[i];
    if (is_word_char(c) || is_protected_char(c)) out.push_back(ascii_lower(c));
  }
  return out;
}

}  // namespace detail

inline TokenStream normalize(std::string_view text) {
  TokenStream out;
  out.source_len = text.size();
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_char(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space_char(text[i])) ++i;
    if (start == i) break;
    auto token = detail::clean_token(text.substr(start, i - start));
    if (!token.empty()) out.tokens.push_back(std::move(token));
  }
  return out;
}

inline std::string join(std::span<const std::string> tokens, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

class StopwordList {
 public:
  StopwordList() = default;

  /// Entries are lowercased and trimmed; blank entries are ignored.
  template <typename Range>
  explicit StopwordList(const Range& words) {
    for (const auto& w : words) add(w);
  }

  void add(std::string_view word) {
    auto w = to_lower(trim(word));
    if (!w.empty()) words_.insert(std::move(w));
  }

  bool contains(std::string_view word) const { return words_.find(std::string(word)) != words_.end(); }
  std::size_t size() const { return words_.size(); }
  const std::set<std::string>& words() const { return words_; }

  friend bool operator==(const StopwordList&, const StopwordList&) = default;

 private:
  std::set<std::string> words_;
};

inline TokenStream remove_stopwords(const TokenStream& stream, const StopwordList& stops) {
  TokenStream out;
  out.source_len = stream.source_len;
  for (const auto& t : stream.tokens) {
    if (!stops.contains(t)) out.tokens.push_back(t);
  }
  return out;
}

using NGram = std::vector<std::string>;

inline std::vector<NGram> ngrams(const TokenStream& stream, std::size_t n) {
  if (n == 0) throw ArgumentError("ngrams: n must be >= 1");
  std::vector<NGram> out;
  if (stream.tokens.size() < n) return out;
  out.reserve(stream.tokens.size() - n + 1);
  for (std::size_t i = 0; i + n <= stream.tokens.size(); ++i) {
    out.emplace_back(stream.tokens.begin() + static_cast<std::ptrdiff_t>(i),
                     stream.tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
  }
  return out;
}

/// Parses a stop-word file: one word per line, '#' comment lines ignored.
inline StopwordList parse_stopwords(std::string_view text) {
  StopwordList out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    if (!line.empty() && line.front() != '#') out.add(line);
    pos = nl + 1;
  }
  return out;
}

inline StopwordList load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("stopwords: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_stopwords(text);
}

/// Default English list, identical to data/stopwords.txt.
inline const StopwordList& default_stopwords() {
  static const StopwordList list(std::vector<std::string_view>{
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
      "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
      "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
      "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
      "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
      "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
      "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
      "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
      "only", "own", "same", "so", "than", "too", "very", "can", "will", "just", "should", "now", "also",
      "our", "us", "would", "could", "may", "might", "must", "shall"});
  return list;
}

}  // namespace skillgap
