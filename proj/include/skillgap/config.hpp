#pragma once

// Run configuration and its TOML-style file format:
//
//   [paths]       jobs, curricula, taxonomy, stopwords, out, job_table, curriculum_table
//   [thresholds]  job_match, module_group, alignment_tau
//   [stats]       min_row_total, exclude_unlabeled
//   [analysis]    ngram_max, split_k, top_modules, workers
//
// Values are double-quoted strings, numbers or true/false; '#' starts a
// comment. Relative paths resolve against the config file's directory.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "skillgap/error.hpp"
#include "skillgap/text_normalize.hpp"

namespace skillgap {

struct RunConfig {
  // paths
  std::string jobs;
  std::string curricula;
  std::string taxonomy;   // empty = built-in default
  std::string stopwords;  // empty = built-in default
  std::string out = "out";
  std::string job_table;         // gap: read job coverage from a table7-style CSV
  std::string curriculum_table;  // gap: read curriculum shares from a table5-style CSV

  // thresholds
  double job_match = 0.95;
  double module_group = 0.75;
  double alignment_tau = 0.18;

  std::size_t ngram_max = 3;

  // stats
  std::size_t min_row_total = 5;
  bool exclude_unlabeled = true;

  std::size_t split_k = 15;
  std::size_t top_modules = 15;
  std::size_t workers = 1;
  std::string generated;  // ISO date stamped into output headers; empty = today

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0 && v <= 1.0)) throw InputError(std::string("config: ") + name + " must lie in (0, 1]");
    };
    check(job_match, "thresholds.job_match");
    check(module_group, "thresholds.module_group");
    check(alignment_tau, "thresholds.alignment_tau");
    if (ngram_max == 0) throw InputError("config: analysis.ngram_max must be >= 1");
    if (split_k == 0) throw InputError("config: analysis.split_k must be >= 1");
    if (top_modules == 0) throw InputError("config: analysis.top_modules must be >= 1");
    if (workers == 0) throw InputError("config: analysis.workers must be >= 1");
  }
};

namespace detail {

using ConfigValue = std::variant<std::string, double, bool>;

inline ConfigValue parse_config_value(std::string_view v, std::size_t line) {
  const auto where = " (line " + std::to_string(line) + ")";
  if (v.empty()) throw InputError("config: missing value" + where);
  if (v.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < v.size() && v[i] != '"'; ++i) {
      if (v[i] == '\\' && i + 1 < v.size()) {
        const char e = v[++i];
        out.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
      } else {
        out.push_back(v[i]);
      }
    }
    if (i >= v.size()) throw InputError("config: unterminated string" + where);
    auto rest = trim(v.substr(i + 1));
    if (!rest.empty() && rest.front() != '#') throw InputError("config: trailing characters after string" + where);
    return out;
  }
  auto cut = v.find('#');
  auto bare = trim(v.substr(0, cut));
  if (bare == "true") return true;
  if (bare == "false") return false;
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(bare), &used);
    if (used != bare.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw InputError("config: cannot parse value '" + std::string(bare) + "'" + where);
  }
}

}  // namespace detail

inline void apply_config_text(RunConfig& cfg, std::string_view text, const std::filesystem::path& base_dir = {}) {
  std::string section;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto where = " (line " + std::to_string(line_no) + ")";
    if (line.front() == '[') {
      const auto close = line.find(']');
      if (close == std::string_view::npos) throw InputError("config: malformed section header" + where);
      section = std::string(trim(line.substr(1, close - 1)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw InputError("config: expected key = value" + where);
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const auto value = detail::parse_config_value(trim(line.substr(eq + 1)), line_no);

    auto as_path = [&](std::string& dst) {
      if (!std::holds_alternative<std::string>(value)) throw InputError("config: " + key + " must be a string" + where);
      std::filesystem::path p(std::get<std::string>(value));
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      dst = p.lexically_normal().string();
    };
    auto as_double = [&](double& dst) {
      if (!std::holds_alternative<double>(value)) throw InputError("config: " + key + " must be a number" + where);
      dst = std::get<double>(value);
    };
    auto as_count = [&](std::size_t& dst) {
      double d = 0;
      as_double(d);
      if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) {
        throw InputError("config: " + key + " must be a non-negative integer" + where);
      }
      dst = static_cast<std::size_t>(d);
    };

    if (key == "paths.jobs") as_path(cfg.jobs);
    else if (key == "paths.curricula") as_path(cfg.curricula);
    else if (key == "paths.taxonomy") as_path(cfg.taxonomy);
    else if (key == "paths.stopwords") as_path(cfg.stopwords);
    else if (key == "paths.out") as_path(cfg.out);
    else if (key == "paths.job_table") as_path(cfg.job_table);
    else if (key == "paths.curriculum_table") as_path(cfg.curriculum_table);
    else if (key == "thresholds.job_match") as_double(cfg.job_match);
    else if (key == "thresholds.module_group") as_double(cfg.module_group);
    else if (key == "thresholds.alignment_tau") as_double(cfg.alignment_tau);
    else if (key == "stats.min_row_total") as_count(cfg.min_row_total);
    else if (key == "stats.exclude_unlabeled") {
      if (!std::holds_alternative<bool>(value)) throw InputError("config: " + key + " must be true/false" + where);
      cfg.exclude_unlabeled = std::get<bool>(value);
    } else if (key == "analysis.ngram_max") as_count(cfg.ngram_max);
    else if (key == "analysis.split_k") as_count(cfg.split_k);
    else if (key == "analysis.top_modules") as_count(cfg.top_modules);
    else if (key == "analysis.workers") as_count(cfg.workers);
    else throw InputError("config: unknown key '" + key + "'" + where);
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("config: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  RunConfig cfg;
  apply_config_text(cfg, text, std::filesystem::path(path).parent_path());
  return cfg;
}

}  // namespace skillgap
