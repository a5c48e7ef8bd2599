#pragma once

// Corpus-level aggregation: job coverage per category, keyword frequency,
// curriculum distribution, top/bottom split, normalisation and the
// curriculum-vs-demand gap map.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "skillgap/corpus.hpp"
#include "skillgap/error.hpp"
#include "skillgap/fuzzy_match.hpp"
#include "skillgap/parallel.hpp"
#include "skillgap/taxonomy.hpp"
#include "skillgap/text_normalize.hpp"

namespace skillgap {

/// Text -> cleaned tokens -> keyword hits, with one taxonomy, stop-word list
/// and threshold. Holds references; both must outlive the matcher.
class DocumentMatcher {
 public:
  DocumentMatcher(const SkillTaxonomy& taxonomy, const StopwordList& stops, double threshold, std::size_t workers = 1)
      : taxonomy_(&taxonomy), stops_(&stops), threshold_(threshold), workers_(std::max<std::size_t>(workers, 1)) {
    check_threshold(threshold, "DocumentMatcher");
  }

  TokenStream tokens(std::string_view text) const { return remove_stopwords(normalize(text), *stops_); }
  std::vector<MatchHit> hits(std::string_view text) const {
    return match_keywords(tokens(text), *taxonomy_, threshold_);
  }

  /// Hits for every text, in input order.
  std::vector<std::vector<MatchHit>> hits_all(const std::vector<std::string>& texts) const {
    return parallel_map(texts.size(), [&](std::size_t i) { return hits(texts[i]); }, workers_);
  }

  const SkillTaxonomy& taxonomy() const { return *taxonomy_; }
  double threshold() const { return threshold_; }
  std::size_t workers() const { return workers_; }

 private:
  const SkillTaxonomy* taxonomy_;
  const StopwordList* stops_;
  double threshold_;
  std::size_t workers_;
};

struct CategoryProfile {
  std::string category_abbr;
  std::string category_name;
  double doc_coverage_pct = 0.0;
  std::size_t covered_docs = 0;
  std::size_t total_mentions = 0;
};

struct JobCoverage {
  std::vector<CategoryProfile> categories;  // taxonomy order
  std::size_t doc_count = 0;
};

inline std::vector<std::string> descriptions(const std::vector<JobPosting>& jobs) {
  std::vector<std::string> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs) out.push_back(j.description);
  return out;
}

inline JobCoverage coverage_from_hits(const std::vector<std::vector<MatchHit>>& per_doc, const SkillTaxonomy& taxonomy) {
  if (per_doc.empty()) throw ArgumentError("job_category_coverage: empty corpus");
  JobCoverage out;
  out.doc_count = per_doc.size();
  for (const auto& c : taxonomy.categories()) out.categories.push_back({c.abbreviation, c.name, 0.0, 0, 0});
  for (const auto& hits : per_doc) {
    const auto row = profile_from_hits(hits, taxonomy);
    for (std::size_t i = 0; i < row.mentions.size(); ++i) {
      out.categories[i].total_mentions += row.mentions[i];
      out.categories[i].covered_docs += row.present(i) ? 1 : 0;
    }
  }
  for (auto& p : out.categories) {
    p.doc_coverage_pct = 100.0 * static_cast<double>(p.covered_docs) / static_cast<double>(out.doc_count);
  }
  return out;
}

inline JobCoverage job_category_coverage(const std::vector<JobPosting>& jobs, const DocumentMatcher& matcher) {
  if (jobs.empty()) throw ArgumentError("job_category_coverage: empty corpus");
  return coverage_from_hits(matcher.hits_all(descriptions(jobs)), matcher.taxonomy());
}

struct KeywordFrequency {
  std::string keyword;
  std::size_t docs = 0;
  double pct = 0.0;
};

inline std::vector<KeywordFrequency> keyword_frequency_from_hits(const std::vector<std::vector<MatchHit>>& per_doc,
                                                                 const std::vector<std::string>& keywords) {
  if (keywords.empty()) throw ArgumentError("keyword_frequency: empty keyword list");
  if (per_doc.empty()) throw ArgumentError("keyword_frequency: empty corpus");
  std::vector<KeywordFrequency> out;
  for (const auto& k : keywords) {
    KeywordFrequency f{k, 0, 0.0};
    for (const auto& hits : per_doc) {
      if (std::any_of(hits.begin(), hits.end(), [&](const MatchHit& h) { return h.keyword == k; })) ++f.docs;
    }
    f.pct = 100.0 * static_cast<double>(f.docs) / static_cast<double>(per_doc.size());
    out.push_back(std::move(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.docs > b.docs; });
  return out;
}

/// Share of documents with at least one hit for each keyword, descending.
/// Ties keep the order of `keywords`.
inline std::vector<KeywordFrequency> keyword_frequency(const std::vector<JobPosting>& jobs,
                                                       const std::vector<std::string>& keywords,
                                                       const DocumentMatcher& matcher) {
  if (keywords.empty()) throw ArgumentError("keyword_frequency: empty keyword list");
  for (const auto& k : keywords) {
    bool known = false;
    for (const auto& c : matcher.taxonomy().categories()) {
      known = known || std::find(c.keywords.begin(), c.keywords.end(), k) != c.keywords.end();
    }
    if (!known) throw ArgumentError("keyword_frequency: '" + k + "' is not a taxonomy keyword");
  }
  if (jobs.empty()) throw ArgumentError("keyword_frequency: empty corpus");
  return keyword_frequency_from_hits(matcher.hits_all(descriptions(jobs)), keywords);
}

// ---------------------------------------------------------------------------
// Curricula

struct CurriculumDistribution {
  std::vector<std::string> category_abbrs;  // taxonomy order
  std::vector<std::string> category_names;
  std::vector<std::size_t> module_counts;
  std::vector<double> module_pct;
  std::size_t total_modules = 0;
  std::size_t se_modules = 0;  // modules in at least one category
  double se_share_pct = 0.0;   // pooled over all modules
  double se_share_programme_mean_pct = 0.0;  // mean of per-programme shares
  std::size_t programme_count = 0;
  /// Per module (pooled order), the categories it was assigned to.
  std::vector<std::vector<std::size_t>> assignments;
};

inline std::string module_text(const ModuleRecord& m) {
  return m.description ? m.name + " " + *m.description : m.name;
}

/// A module belongs to every category with at least one hit on its name
/// plus description. Percentages are pooled over all modules.
inline CurriculumDistribution curriculum_distribution(const std::vector<CurriculumProgram>& programs,
                                                      const DocumentMatcher& matcher) {
  if (programs.empty()) throw ArgumentError("curriculum_distribution: empty programme set");
  const auto& tax = matcher.taxonomy();
  std::vector<std::string> texts;
  std::vector<std::size_t> owner;
  for (std::size_t p = 0; p < programs.size(); ++p) {
    for (const auto& m : programs[p].modules) {
      texts.push_back(module_text(m));
      owner.push_back(p);
    }
  }
  if (texts.empty()) throw ArgumentError("curriculum_distribution: no modules");
  const auto per_module = matcher.hits_all(texts);

  CurriculumDistribution d;
  d.programme_count = programs.size();
  d.total_modules = texts.size();
  for (const auto& c : tax.categories()) {
    d.category_abbrs.push_back(c.abbreviation);
    d.category_names.push_back(c.name);
  }
  d.module_counts.assign(tax.size(), 0);
  std::vector<std::size_t> prog_total(programs.size(), 0), prog_se(programs.size(), 0);
  for (std::size_t i = 0; i < per_module.size(); ++i) {
    const auto row = profile_from_hits(per_module[i], tax);
    std::vector<std::size_t> cats;
    for (std::size_t c = 0; c < row.mentions.size(); ++c) {
      if (row.present(c)) {
        ++d.module_counts[c];
        cats.push_back(c);
      }
    }
    ++prog_total[owner[i]];
    if (!cats.empty()) {
      ++d.se_modules;
      ++prog_se[owner[i]];
    }
    d.assignments.push_back(std::move(cats));
  }
  const double total = static_cast<double>(d.total_modules);
  for (auto n : d.module_counts) d.module_pct.push_back(100.0 * static_cast<double>(n) / total);
  d.se_share_pct = 100.0 * static_cast<double>(d.se_modules) / total;
  double mean = 0.0;
  for (std::size_t p = 0; p < programs.size(); ++p) {
    mean += 100.0 * static_cast<double>(prog_se[p]) / static_cast<double>(prog_total[p]);
  }
  d.se_share_programme_mean_pct = mean / static_cast<double>(programs.size());
  return d;
}

/// Distributions over the k best-ranked and the k worst-ranked programmes.
inline std::pair<CurriculumDistribution, CurriculumDistribution> split_rank_compare(
    std::vector<CurriculumProgram> programs, std::size_t k, const DocumentMatcher& matcher) {
  if (k == 0) throw ArgumentError("split_rank_compare: k must be positive");
  if (programs.size() < 2 * k) {
    throw ArgumentError("split_rank_compare: need at least " + std::to_string(2 * k) + " programmes, have " +
                        std::to_string(programs.size()));
  }
  std::stable_sort(programs.begin(), programs.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
  const auto k_ = static_cast<std::ptrdiff_t>(k);
  std::vector<CurriculumProgram> top(programs.begin(), programs.begin() + k_);
  std::vector<CurriculumProgram> bottom(programs.end() - k_, programs.end());
  return {curriculum_distribution(top, matcher), curriculum_distribution(bottom, matcher)};
}

// ---------------------------------------------------------------------------
// Normalisation and gap map

/// Rescales so the values sum to 100.
inline std::vector<double> normalize_to_100(const std::vector<double>& coverages) {
  double sum = 0.0;
  for (double c : coverages) {
    if (c < 0.0 || std::isnan(c)) throw ArgumentError("normalize_to_100: coverages must be non-negative");
    sum += c;
  }
  if (!(sum > 0.0)) throw ArgumentError("normalize_to_100: all coverages are zero");
  std::vector<double> out;
  out.reserve(coverages.size());
  for (double c : coverages) out.push_back(100.0 * c / sum);
  return out;
}

inline std::vector<double> normalize_to_100(const std::vector<CategoryProfile>& profiles) {
  std::vector<double> cov;
  for (const auto& p : profiles) cov.push_back(p.doc_coverage_pct);
  return normalize_to_100(cov);
}

enum class Alignment { Aligned, Undervalued, Overvalued };

inline std::string_view to_string(Alignment a) {
  switch (a) {
    case Alignment::Aligned: return "Aligned";
    case Alignment::Undervalued: return "Undervalued";
    case Alignment::Overvalued: return "Overvalued";
  }
  return "";
}

inline Alignment classify_gap(double gap_ratio, double tau) {
  if (gap_ratio >= tau) return Alignment::Undervalued;
  if (gap_ratio <= -tau) return Alignment::Overvalued;
  return Alignment::Aligned;
}

/// One side of the comparison: a percentage per category.
struct CategoryShare {
  std::string abbr;
  std::string name;
  double pct = 0.0;
};

struct GapRecord {
  std::string category_abbr;
  std::string category_name;
  double curriculum_pct = 0.0;
  double job_pct_normalized = 0.0;
  double gap_ratio = 0.0;  // (job - curriculum) / curriculum
  Alignment alignment = Alignment::Aligned;
};

/// Records come back by descending normalised job share.
inline std::vector<GapRecord> gap_map(const std::vector<CategoryShare>& curriculum,
                                      const std::vector<CategoryShare>& job_normalized, double tau = 0.18) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ArgumentError("gap_map: tau must lie in (0, 1]");
  auto find = [](const std::vector<CategoryShare>& side, const std::string& abbr) -> const CategoryShare* {
    for (const auto& s : side) {
      if (s.abbr == abbr) return &s;
    }
    return nullptr;
  };
  for (const auto& j : job_normalized) {
    if (!find(curriculum, j.abbr)) throw InputError("gap_map: category " + j.abbr + " missing from curriculum side");
  }
  std::vector<GapRecord> out;
  for (const auto& c : curriculum) {
    const auto* j = find(job_normalized, c.abbr);
    if (!j) throw InputError("gap_map: category " + c.abbr + " missing from job side");
    if (!(c.pct > 0.0)) throw InputError("gap_map: curriculum share of " + c.abbr + " is zero; gap ratio undefined");
    GapRecord r;
    r.category_abbr = c.abbr;
    r.category_name = c.name.empty() ? j->name : c.name;
    r.curriculum_pct = c.pct;
    r.job_pct_normalized = j->pct;
    r.gap_ratio = (j->pct - c.pct) / c.pct;
    r.alignment = classify_gap(r.gap_ratio, tau);
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GapRecord& a, const GapRecord& b) { return a.job_pct_normalized > b.job_pct_normalized; });
  return out;
}

inline std::vector<CategoryShare> shares(const CurriculumDistribution& d) {
  std::vector<CategoryShare> out;
  for (std::size_t i = 0; i < d.category_abbrs.size(); ++i) {
    out.push_back({d.category_abbrs[i], d.category_names[i], d.module_pct[i]});
  }
  return out;
}

inline std::vector<CategoryShare> normalized_shares(const JobCoverage& cov) {
  const auto norm = normalize_to_100(cov.categories);
  std::vector<CategoryShare> out;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    out.push_back({cov.categories[i].category_abbr, cov.categories[i].category_name, norm[i]});
  }
  return out;
}

}  // namespace skillgap
