#pragma once

// Job postings and curricula: loading from CSV / JSONL / JSON, and the
// derived work-nature and job-family labels.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skillgap/csv.hpp"
#include "skillgap/error.hpp"
#include "skillgap/text_normalize.hpp"

namespace skillgap {

enum class WorkNature { Onsite, Remote, Hybrid };
enum class JobFamily { Engineer, Developer, Other };

inline constexpr WorkNature kAllNatures[] = {WorkNature::Onsite, WorkNature::Remote, WorkNature::Hybrid};

inline std::string_view to_string(WorkNature n) {
  switch (n) {
    case WorkNature::Onsite: return "Onsite";
    case WorkNature::Remote: return "Remote";
    case WorkNature::Hybrid: return "Hybrid";
  }
  return "";
}

inline std::string_view to_string(JobFamily f) {
  switch (f) {
    case JobFamily::Engineer: return "Engineer";
    case JobFamily::Developer: return "Developer";
    case JobFamily::Other: return "Other";
  }
  return "";
}

struct JobPosting {
  std::string id;
  std::string title;
  std::string location;              // raw text as collected
  std::optional<std::string> city;   // absent when unspecified
  std::optional<std::string> salary_text;
  std::string description;
  WorkNature nature = WorkNature::Onsite;
  JobFamily family = JobFamily::Other;
  std::optional<std::chrono::year_month_day> collected_on;

  friend bool operator==(const JobPosting&, const JobPosting&) = default;
};

struct ModuleRecord {
  std::string name;
  std::optional<std::string> description;

  friend bool operator==(const ModuleRecord&, const ModuleRecord&) = default;
};

struct CurriculumProgram {
  std::string university;
  int rank = 0;
  std::string programme_name;
  std::vector<ModuleRecord> modules;

  friend bool operator==(const CurriculumProgram&, const CurriculumProgram&) = default;
};

struct Diagnostic {
  std::size_t row = 0;  // 1-based data row (CSV record / JSONL line / array index)
  std::string reason;
};

struct JobCorpus {
  std::vector<JobPosting> postings;
  std::vector<Diagnostic> rejected;
};

struct CurriculumSet {
  std::vector<CurriculumProgram> programs;
  std::vector<Diagnostic> rejected;
};

// ---------------------------------------------------------------------------
// Classification

inline bool contains_ci(std::string_view haystack, std::string_view needle) {
  return to_lower(haystack).find(needle) != std::string::npos;
}

/// "hybrid" beats "remote"; the location is consulted before the description
/// and the first field mentioning either decides.
inline WorkNature classify_nature(std::string_view location_text, std::string_view description) {
  for (auto field : {location_text, description}) {
    if (contains_ci(field, "hybrid")) return WorkNature::Hybrid;
    if (contains_ci(field, "remote")) return WorkNature::Remote;
  }
  return WorkNature::Onsite;
}

inline JobFamily classify_family(std::string_view title) {
  if (contains_ci(title, "engineer")) return JobFamily::Engineer;
  if (contains_ci(title, "developer")) return JobFamily::Developer;
  return JobFamily::Other;
}

/// City part of a free-text location: parenthesised remarks and work-mode
/// words dropped, first comma-separated component kept. Placeholders such
/// as "Unknown" or a bare country yield nullopt.
inline std::optional<std::string> extract_city(std::string_view location) {
  std::string text;
  int depth = 0;
  for (char c : location) {
    if (c == '(' || c == '[') ++depth;
    else if ((c == ')' || c == ']') && depth > 0) --depth;
    else if (depth == 0) text.push_back(c);
  }
  if (auto comma = text.find(','); comma != std::string::npos) text.resize(comma);

  static const std::set<std::string> mode_words = {"remote", "hybrid", "onsite", "on-site", "in-office",
                                                   "office", "-", "/", "|"};
  std::istringstream words(text);
  std::string w, kept;
  while (words >> w) {
    if (mode_words.count(to_lower(w))) continue;
    if (!kept.empty()) kept.push_back(' ');
    kept += w;
  }
  static const std::set<std::string> placeholders = {"", "unknown", "n/a", "na", "not specified", "unspecified",
                                                     "uk", "united kingdom", "england", "anywhere"};
  if (placeholders.count(to_lower(kept))) return std::nullopt;
  return kept;
}

inline std::optional<std::chrono::year_month_day> parse_date(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(std::string(s).c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3 || s.size() != 10) {
    throw InputError("invalid date '" + std::string(s) + "' (expected YYYY-MM-DD)");
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw InputError("invalid date '" + std::string(s) + "'");
  return ymd;
}

inline std::string format_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

// ---------------------------------------------------------------------------
// Jobs

enum class JobFormat { CSV, JSONL };

inline constexpr std::string_view kJobColumns[] = {"id", "title", "location", "salary", "description", "date"};

namespace detail {

struct RawJob {
  std::string id, title, location, salary, description, date;
};

inline std::optional<std::string> non_empty(std::string_view s) {
  auto t = trim(s);
  if (t.empty()) return std::nullopt;
  return std::string(t);
}

// Shared by both formats; throws InputError with the rejection reason.
inline JobPosting build_posting(const RawJob& raw) {
  JobPosting p;
  p.id = std::string(trim(raw.id));
  if (p.id.empty()) throw InputError("empty id");
  p.title = std::string(trim(raw.title));
  p.description = std::string(trim(raw.description));
  if (p.description.empty()) throw InputError("empty description");
  p.location = std::string(trim(raw.location));
  p.city = extract_city(p.location);
  p.salary_text = non_empty(raw.salary);
  p.collected_on = parse_date(raw.date);
  p.nature = classify_nature(p.location, p.description);
  p.family = classify_family(p.title);
  return p;
}

inline std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string(what) + ": cannot open '" + path + "'");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void accept(JobCorpus& corpus, std::set<std::string>& ids, std::size_t row, const RawJob& raw) {
  try {
    auto p = build_posting(raw);
    if (!ids.insert(p.id).second) throw InputError("duplicate id '" + p.id + "'");
    corpus.postings.push_back(std::move(p));
  } catch (const InputError& e) {
    corpus.rejected.push_back({row, e.what()});
  }
}

}  // namespace detail

inline JobCorpus parse_jobs_csv(std::string_view text) {
  csv::Reader reader(text);
  auto header = reader.next();
  if (!header) throw InputError("jobs: empty CSV file");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header->fields.size(); ++i) col[to_lower(trim(header->fields[i]))] = i;
  for (const char* required : {"id", "title", "description"}) {
    if (!col.count(required)) throw InputError(std::string("jobs: missing mandatory column '") + required + "'");
  }
  auto get = [&](const csv::Record& r, const char* name) -> std::string {
    auto it = col.find(name);
    return it != col.end() && it->second < r.size() ? r[it->second] : std::string();
  };

  JobCorpus corpus;
  std::set<std::string> ids;
  std::size_t row = 0;
  while (auto rec = reader.next()) {
    ++row;
    if (rec->fields.size() == 1 && trim(rec->fields[0]).empty()) continue;  // blank line
    if (reader.failed()) {
      corpus.rejected.push_back({row, reader.error()});
      break;
    }
    if (rec->fields.size() != header->fields.size()) {
      corpus.rejected.push_back({row, "expected " + std::to_string(header->fields.size()) + " fields, found " +
                                          std::to_string(rec->fields.size())});
      continue;
    }
    const auto& f = rec->fields;
    detail::accept(corpus, ids, row,
                   {get(f, "id"), get(f, "title"), get(f, "location"), get(f, "salary"), get(f, "description"),
                    get(f, "date")});
  }
  return corpus;
}

inline JobCorpus parse_jobs_jsonl(std::string_view text) {
  JobCorpus corpus;
  std::set<std::string> ids;
  std::size_t row = 0, pos = 0;
  bool seen_required = false;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++row;
    if (line.empty()) continue;
    nlohmann::json o;
    try {
      o = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      corpus.rejected.push_back({row, std::string("unparseable JSON: ") + e.what()});
      continue;
    }
    if (!o.is_object()) {
      corpus.rejected.push_back({row, "line is not a JSON object"});
      continue;
    }
    if (!seen_required) {
      for (const char* required : {"id", "title", "description"}) {
        if (!o.contains(required)) throw InputError(std::string("jobs: missing mandatory field '") + required + "'");
      }
      seen_required = true;
    }
    auto get = [&](const char* name) -> std::string {
      if (!o.contains(name) || o[name].is_null()) return {};
      if (o[name].is_string()) return o[name].get<std::string>();
      return o[name].dump();
    };
    detail::accept(corpus, ids, row,
                   {get("id"), get("title"), get("location"), get("salary"), get("description"), get("date")});
  }
  return corpus;
}

inline JobCorpus load_jobs(const std::string& path, JobFormat format) {
  const auto text = detail::read_file(path, "jobs");
  return format == JobFormat::CSV ? parse_jobs_csv(text) : parse_jobs_jsonl(text);
}

/// Format from the file extension: ".jsonl" / ".ndjson" select JSONL.
inline JobFormat job_format_for(std::string_view path) {
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() && to_lower(path.substr(path.size() - suf.size())) == suf;
  };
  return ends(".jsonl") || ends(".ndjson") ? JobFormat::JSONL : JobFormat::CSV;
}

inline std::string write_jobs_csv(const std::vector<JobPosting>& jobs) {
  std::string out = csv::format_record({kJobColumns[0].data(), kJobColumns[1].data(), kJobColumns[2].data(),
                                        kJobColumns[3].data(), kJobColumns[4].data(), kJobColumns[5].data()});
  for (const auto& j : jobs) {
    out += csv::format_record({j.id, j.title, j.location, j.salary_text.value_or(""), j.description,
                               j.collected_on ? format_date(*j.collected_on) : ""});
  }
  return out;
}

inline std::string write_jobs_jsonl(const std::vector<JobPosting>& jobs) {
  std::string out;
  for (const auto& j : jobs) {
    nlohmann::ordered_json o;
    o["id"] = j.id;
    o["title"] = j.title;
    o["location"] = j.location;
    o["salary"] = j.salary_text ? nlohmann::ordered_json(*j.salary_text) : nlohmann::ordered_json(nullptr);
    o["description"] = j.description;
    o["date"] = j.collected_on ? nlohmann::ordered_json(format_date(*j.collected_on)) : nlohmann::ordered_json(nullptr);
    out += o.dump() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Curricula

/// Programmes come back sorted by rank; duplicate ranks are fatal, empty
/// programmes are dropped with a diagnostic.
inline CurriculumSet parse_curricula(const nlohmann::json& doc) {
  if (!doc.is_array()) throw InputError("curricula: top-level value must be an array");
  CurriculumSet set;
  std::map<int, std::string> ranks;
  std::size_t row = 0;
  for (const auto& o : doc) {
    ++row;
    CurriculumProgram p;
    try {
      if (!o.is_object()) throw InputError("programme entry is not an object");
      for (const char* key : {"university", "rank", "programme", "modules"}) {
        if (!o.contains(key)) throw InputError(std::string("missing field '") + key + "'");
      }
      p.university = o.at("university").get<std::string>();
      if (!o.at("rank").is_number_integer() || o.at("rank").get<long long>() <= 0) {
        throw InputError("rank must be a positive integer");
      }
      p.rank = o.at("rank").get<int>();
      p.programme_name = o.at("programme").get<std::string>();
      for (const auto& m : o.at("modules")) {
        ModuleRecord rec;
        rec.name = std::string(trim(m.at("name").get<std::string>()));
        if (m.contains("description") && !m.at("description").is_null()) {
          rec.description = m.at("description").get<std::string>();
        }
        if (rec.name.empty()) {
          set.rejected.push_back({row, p.university + ": module with empty name dropped"});
          continue;
        }
        p.modules.push_back(std::move(rec));
      }
    } catch (const nlohmann::json::exception& e) {
      set.rejected.push_back({row, std::string("malformed programme: ") + e.what()});
      continue;
    } catch (const InputError& e) {
      set.rejected.push_back({row, e.what()});
      continue;
    }
    if (auto [it, inserted] = ranks.emplace(p.rank, p.university); !inserted) {
      throw InputError("curricula: rank " + std::to_string(p.rank) + " shared by '" + it->second + "' and '" +
                       p.university + "'");
    }
    if (p.modules.empty()) {
      set.rejected.push_back({row, p.university + ": programme has no modules"});
      continue;
    }
    set.programs.push_back(std::move(p));
  }
  std::stable_sort(set.programs.begin(), set.programs.end(),
                   [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return set;
}

inline CurriculumSet load_curricula(const std::string& path) {
  const auto text = detail::read_file(path, "curricula");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("curricula: '" + path + "': " + e.what());
  }
  return parse_curricula(doc);
}

inline nlohmann::ordered_json to_json(const std::vector<CurriculumProgram>& programs) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : programs) {
    nlohmann::ordered_json o;
    o["university"] = p.university;
    o["rank"] = p.rank;
    o["programme"] = p.programme_name;
    auto mods = nlohmann::ordered_json::array();
    for (const auto& m : p.modules) {
      nlohmann::ordered_json mo;
      mo["name"] = m.name;
      if (m.description) mo["description"] = *m.description;
      mods.push_back(std::move(mo));
    }
    o["modules"] = std::move(mods);
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace skillgap
