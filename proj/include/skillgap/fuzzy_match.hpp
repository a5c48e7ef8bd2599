#pragma once

// Approximate keyword matching over token streams, and near-duplicate
// clustering of module names.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "skillgap/error.hpp"
#include "skillgap/taxonomy.hpp"
#include "skillgap/text_normalize.hpp"

namespace skillgap {

/// Edit distance (insert, delete, substitute; unit costs) over bytes.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

/// 1 - levenshtein(a, b) / max(|a|, |b|); two empty strings are identical.
inline double similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

inline void check_threshold(double threshold, std::string_view where) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ArgumentError(std::string(where) + ": threshold must lie in (0, 1], got " + std::to_string(threshold));
  }
}

struct MatchHit {
  std::string keyword;
  std::string category_abbr;
  std::size_t token_index = 0;
  double score = 0.0;

  friend bool operator==(const MatchHit&, const MatchHit&) = default;
};

namespace detail {

struct KeywordForm {
  std::string text;  // compared against the space-joined window
  std::size_t words = 1;
};

inline std::size_t word_count(std::string_view s) {
  std::size_t n = 1;
  for (char c : s) n += (c == ' ');
  return n;
}

// The keyword itself, plus a spaced variant for keywords containing '-' or
// '/' so that "real-time" also matches the tokens "real time".
inline std::vector<KeywordForm> keyword_forms(const std::string& keyword) {
  std::vector<KeywordForm> forms{{keyword, word_count(keyword)}};
  if (keyword.find_first_of("-/") != std::string::npos) {
    std::string spaced = keyword;
    std::replace(spaced.begin(), spaced.end(), '-', ' ');
    std::replace(spaced.begin(), spaced.end(), '/', ' ');
    forms.push_back({spaced, word_count(spaced)});
  }
  return forms;
}

inline bool length_bound_admits(std::size_t la, std::size_t lb, double threshold) {
  const std::size_t longest = std::max(la, lb);
  if (longest == 0) return true;
  const std::size_t diff = la > lb ? la - lb : lb - la;
  return 1.0 - static_cast<double>(diff) / static_cast<double>(longest) >= threshold;
}

}  // namespace detail

/// Every window whose similarity to a keyword reaches `threshold`, in stream
/// order. Windows span as many tokens as the keyword has words; overlapping
/// hits are all reported.
inline std::vector<MatchHit> match_keywords(const TokenStream& stream, const SkillTaxonomy& taxonomy,
                                            double threshold) {
  check_threshold(threshold, "match_keywords");
  struct Ranked {
    MatchHit hit;
    std::size_t category;
    std::size_t keyword;
    std::size_t form;
  };
  std::vector<Ranked> found;
  std::map<std::size_t, std::vector<std::string>> windows;  // width -> joined windows
  const auto& cats = taxonomy.categories();
  for (std::size_t ci = 0; ci < cats.size(); ++ci) {
    for (std::size_t ki = 0; ki < cats[ci].keywords.size(); ++ki) {
      const auto forms = detail::keyword_forms(cats[ci].keywords[ki]);
      for (std::size_t fi = 0; fi < forms.size(); ++fi) {
        const auto& form = forms[fi];
        auto it = windows.find(form.words);
        if (it == windows.end()) {
          std::vector<std::string> joined;
          for (const auto& g : ngrams(stream, form.words)) joined.push_back(join(g));
          it = windows.emplace(form.words, std::move(joined)).first;
        }
        for (std::size_t pos = 0; pos < it->second.size(); ++pos) {
          const auto& w = it->second[pos];
          if (!detail::length_bound_admits(w.size(), form.text.size(), threshold)) continue;
          const double score = similarity(w, form.text);
          if (score >= threshold) {
            found.push_back({{cats[ci].keywords[ki], cats[ci].abbreviation, pos, score}, ci, ki, fi});
          }
        }
      }
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Ranked& a, const Ranked& b) {
    return std::tie(a.hit.token_index, a.category, a.keyword, a.form) <
           std::tie(b.hit.token_index, b.category, b.keyword, b.form);
  });
  std::vector<MatchHit> out;
  out.reserve(found.size());
  for (auto& r : found) out.push_back(std::move(r.hit));
  return out;
}

/// Per-category mention counts for one document, aligned with the taxonomy's
/// category order.
struct CategoryProfileRow {
  std::vector<std::size_t> mentions;

  bool present(std::size_t category) const { return mentions.at(category) > 0; }
  std::size_t total() const {
    std::size_t t = 0;
    for (auto m : mentions) t += m;
    return t;
  }
  friend bool operator==(const CategoryProfileRow&, const CategoryProfileRow&) = default;
};

inline CategoryProfileRow profile_from_hits(const std::vector<MatchHit>& hits, const SkillTaxonomy& taxonomy) {
  CategoryProfileRow row{std::vector<std::size_t>(taxonomy.size(), 0)};
  for (const auto& h : hits) ++row.mentions[*taxonomy.index_of(h.category_abbr)];
  return row;
}

inline CategoryProfileRow categorize_document(const TokenStream& stream, const SkillTaxonomy& taxonomy,
                                              double threshold) {
  return profile_from_hits(match_keywords(stream, taxonomy, threshold), taxonomy);
}

// ---------------------------------------------------------------------------
// Module-name clustering

struct ModuleCluster {
  std::string canonical_name;
  std::vector<std::pair<std::string, std::size_t>> members;  // original spelling, count
  std::size_t total = 0;

  friend bool operator==(const ModuleCluster&, const ModuleCluster&) = default;
};

/// Lowercase; every character other than a word character, '#' or '+'
/// becomes a space; whitespace collapsed. "Object-Oriented Programming" and
/// "Object Oriented Programming" map to the same key.
inline std::string normalize_module_name(std::string_view name) {
  std::string spaced;
  spaced.reserve(name.size());
  for (char c : name) spaced.push_back(is_word_char(c) || c == '#' || c == '+' ? ascii_lower(c) : ' ');
  std::string out;
  for (std::size_t i = 0; i < spaced.size();) {
    while (i < spaced.size() && spaced[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < spaced.size() && spaced[i] != ' ') ++i;
    if (i > start) {
      if (!out.empty()) out.push_back(' ');
      out.append(spaced, start, i - start);
    }
  }
  return out;
}

/// Greedy single pass: normalized names in descending frequency (then
/// lexicographic) order either join the first cluster whose canonical name
/// is similar enough or found a new one. Clusters come back by descending
/// total, ties by canonical name.
inline std::vector<ModuleCluster> group_module_names(const std::vector<std::string>& names,
                                                     double threshold = 0.75) {
  check_threshold(threshold, "group_module_names");
  std::map<std::string, std::map<std::string, std::size_t>> by_key;  // key -> original -> count
  for (const auto& n : names) ++by_key[normalize_module_name(n)][n];

  std::vector<std::pair<std::string, std::size_t>> keys;
  for (const auto& [key, originals] : by_key) {
    std::size_t c = 0;
    for (const auto& [_, k] : originals) c += k;
    keys.emplace_back(key, c);
  }
  std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });

  std::vector<ModuleCluster> clusters;
  for (const auto& [key, count] : keys) {
    ModuleCluster* home = nullptr;
    for (auto& c : clusters) {
      if (similarity(c.canonical_name, key) >= threshold) {
        home = &c;
        break;
      }
    }
    if (!home) {
      clusters.push_back({key, {}, 0});
      home = &clusters.back();
    }
    for (const auto& [original, k] : by_key[key]) home->members.emplace_back(original, k);
    home->total += count;
  }
  for (auto& c : clusters) {
    std::sort(c.members.begin(), c.members.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
  }
  std::stable_sort(clusters.begin(), clusters.end(), [](const ModuleCluster& a, const ModuleCluster& b) {
    return a.total != b.total ? a.total > b.total : a.canonical_name < b.canonical_name;
  });
  return clusters;
}

}  // namespace skillgap
