#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "skillgap/corpus.hpp"
#include "skillgap/error.hpp"
#include "skillgap/fuzzy_match.hpp"

namespace skillgap {

struct ModuleRanking {
  std::vector<std::pair<std::string, std::size_t>> entries;  // canonical name, count; non-increasing
  std::size_t total_modules = 0;
  std::size_t cluster_count = 0;
};

/// Most common modules across all programmes after near-duplicate names
/// are merged.
inline ModuleRanking rank_modules(const std::vector<CurriculumProgram>& programs, double threshold,
                                  std::size_t top_n) {
  if (top_n == 0) throw ArgumentError("rank_modules: top_n must be positive");
  if (programs.empty()) throw ArgumentError("rank_modules: empty programme set");
  std::vector<std::string> names;
  for (const auto& p : programs) {
    for (const auto& m : p.modules) names.push_back(m.name);
  }
  const auto clusters = group_module_names(names, threshold);
  ModuleRanking r;
  r.total_modules = names.size();
  r.cluster_count = clusters.size();
  for (std::size_t i = 0; i < clusters.size() && i < top_n; ++i) {
    r.entries.emplace_back(clusters[i].canonical_name, clusters[i].total);
  }
  return r;
}

}  // namespace skillgap
