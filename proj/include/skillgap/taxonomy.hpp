#pragma once

// Skill taxonomy: ten categories in three areas, each with a keyword list.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skillgap/error.hpp"
#include "skillgap/text_normalize.hpp"

namespace skillgap {

enum class SkillGroup {
  SoftwareOrganisationAndProperties,
  SoftwareAndItsEngineering,
  SoftwareCreationAndManagement,
};

inline std::string_view group_label(SkillGroup g) {
  switch (g) {
    case SkillGroup::SoftwareOrganisationAndProperties: return "Software organisation & properties";
    case SkillGroup::SoftwareAndItsEngineering: return "Software & its engineering";
    case SkillGroup::SoftwareCreationAndManagement: return "Software creation & management";
  }
  return "";
}

inline std::optional<SkillGroup> parse_group(std::string_view s) {
  for (auto g : {SkillGroup::SoftwareOrganisationAndProperties, SkillGroup::SoftwareAndItsEngineering,
                 SkillGroup::SoftwareCreationAndManagement}) {
    if (to_lower(s) == to_lower(group_label(g))) return g;
  }
  if (s == "SoftwareOrganisationAndProperties") return SkillGroup::SoftwareOrganisationAndProperties;
  if (s == "SoftwareAndItsEngineering") return SkillGroup::SoftwareAndItsEngineering;
  if (s == "SoftwareCreationAndManagement") return SkillGroup::SoftwareCreationAndManagement;
  return std::nullopt;
}

struct SkillCategory {
  std::string name;
  std::string abbreviation;
  SkillGroup group = SkillGroup::SoftwareAndItsEngineering;
  std::vector<std::string> keywords;
  std::string note;  // free text carried through the file, not used for matching

  friend bool operator==(const SkillCategory&, const SkillCategory&) = default;
};

class SkillTaxonomy {
 public:
  SkillTaxonomy() = default;

  /// Validates every invariant; throws InputError on violation.
  explicit SkillTaxonomy(std::vector<SkillCategory> categories) : categories_(std::move(categories)) {
    validate();
  }

  const std::vector<SkillCategory>& categories() const { return categories_; }
  std::size_t size() const { return categories_.size(); }

  const SkillCategory* find(std::string_view abbreviation) const {
    for (const auto& c : categories_) {
      if (c.abbreviation == abbreviation) return &c;
    }
    return nullptr;
  }

  std::optional<std::size_t> index_of(std::string_view abbreviation) const {
    for (std::size_t i = 0; i < categories_.size(); ++i) {
      if (categories_[i].abbreviation == abbreviation) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const SkillTaxonomy&, const SkillTaxonomy&) = default;

 private:
  void validate() const {
    if (categories_.empty()) throw InputError("taxonomy: at least one category is required");
    std::map<std::string, std::string> owner;
    std::map<std::string, int> abbrs;
    for (const auto& c : categories_) {
      if (trim(c.name).empty()) throw InputError("taxonomy: category with empty name");
      if (trim(c.abbreviation).empty()) throw InputError("taxonomy: category '" + c.name + "' has no abbreviation");
      if (abbrs[c.abbreviation]++) throw InputError("taxonomy: duplicate abbreviation '" + c.abbreviation + "'");
      if (c.keywords.empty()) throw InputError("taxonomy: category " + c.abbreviation + " has no keywords");
      std::map<std::string, int> local;
      for (const auto& k : c.keywords) {
        if (k.size() < 2) {
          throw InputError("taxonomy: keyword '" + k + "' in " + c.abbreviation +
                           " is a single letter; single-letter technologies such as C and R are rejected "
                           "(too many false positives)");
        }
        if (to_lower(k) != k) throw InputError("taxonomy: keyword '" + k + "' is not lowercase");
        if (join(normalize(k).tokens) != k) {
          throw InputError("taxonomy: keyword '" + k + "' in " + c.abbreviation + " is not in normalized token form");
        }
        if (local[k]++) throw InputError("taxonomy: duplicate keyword '" + k + "' in " + c.abbreviation);
        auto [it, inserted] = owner.emplace(k, c.abbreviation);
        if (!inserted) {
          throw InputError("taxonomy: keyword '" + k + "' appears in both " + it->second + " and " + c.abbreviation);
        }
      }
    }
  }

  std::vector<SkillCategory> categories_;
};

inline nlohmann::json to_json(const SkillTaxonomy& tax) {
  auto arr = nlohmann::json::array();
  for (const auto& c : tax.categories()) {
    nlohmann::json o = {{"name", c.name},
                        {"abbreviation", c.abbreviation},
                        {"group", std::string(group_label(c.group))},
                        {"keywords", c.keywords}};
    if (!c.note.empty()) o["note"] = c.note;
    arr.push_back(std::move(o));
  }
  return arr;
}

/// Keywords are lowercased and trimmed before validation.
inline SkillTaxonomy parse_taxonomy(const nlohmann::json& doc) {
  if (!doc.is_array()) throw InputError("taxonomy: top-level value must be an array");
  std::vector<SkillCategory> cats;
  for (const auto& o : doc) {
    if (!o.is_object()) throw InputError("taxonomy: each category must be an object");
    for (const char* key : {"name", "abbreviation", "group", "keywords"}) {
      if (!o.contains(key)) throw InputError(std::string("taxonomy: category missing field '") + key + "'");
    }
    SkillCategory c;
    try {
      c.name = o.at("name").get<std::string>();
      c.abbreviation = o.at("abbreviation").get<std::string>();
      const auto group = o.at("group").get<std::string>();
      auto g = parse_group(group);
      if (!g) throw InputError("taxonomy: unknown group '" + group + "' in " + c.abbreviation);
      c.group = *g;
      for (const auto& k : o.at("keywords")) c.keywords.push_back(to_lower(trim(k.get<std::string>())));
      if (o.contains("note")) c.note = o.at("note").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("taxonomy: ") + e.what());
    }
    cats.push_back(std::move(c));
  }
  return SkillTaxonomy(std::move(cats));
}

inline SkillTaxonomy load_taxonomy(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("taxonomy: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("taxonomy: '" + path + "': " + e.what());
  }
  return parse_taxonomy(doc);
}

/// The shipped scheme; data/taxonomy.json carries the same content.
inline const SkillTaxonomy& default_taxonomy() {
  using G = SkillGroup;
  static const SkillTaxonomy tax(std::vector<SkillCategory>{
      {"Software Domains", "DOM", G::SoftwareOrganisationAndProperties,
       {"e-commerce", "virtualisation", "os", "fintech", "banking", "healthcare", "e-learning"}, ""},
      {"System Structures", "SYS", G::SoftwareOrganisationAndProperties,
       {"architecture", "embedded", "distributed", "real-time", "large-scale", "web", "microservices", "cloud",
        "modularity"},
       ""},
      {"General Programming Languages", "PROG", G::SoftwareAndItsEngineering,
       {"python", "javascript", "java", "c#", "c++", "php", "html", "css", "typescript", "powershell", "kotlin",
        "bash", "ruby", "rust"},
       ""},
      {"Database Management", "DATA", G::SoftwareAndItsEngineering,
       {"database", "sql", "mysql", "nosql", "postgresql", "sqlite", "mongodb", "rdbms", "couchbase", "cassandra"},
       ""},
      {"Programming Language Theory and Compiler Design", "PLT", G::SoftwareAndItsEngineering,
       {"formal", "compiler", "parsers", "generation", "syntax", "lexical", "semantics", "correctness",
        "interpreter"},
       "'generation' is a broad term and is a likely source of false positives"},
      {"Development Frameworks and Tools", "FRWK", G::SoftwareAndItsEngineering,
       {"angular", "asp.net", "react", "django", "express", "spring-boot", "flutter", "laravel", "jquery",
        "xamarin"},
       ""},
      {"Configuration Management and Version Control", "CONF", G::SoftwareAndItsEngineering,
       {"ansible", "git", "gitlab", "github", "svn", "mercurial", "perforce", "kubernetes", "docker"}, ""},
      {"Software Design and Planning", "DES", G::SoftwareCreationAndManagement,
       {"design", "specification", "requirements", "planning", "implementation", "uml", "prototyping",
        "modelling"},
       ""},
      {"Software Development Techniques", "DEV", G::SoftwareCreationAndManagement,
       {"automation", "oop", "tdd", "ci/cd", "flowcharts", "risk", "scrum", "agile", "devops", "refactoring"}, ""},
      {"Software Verification and Validation", "VER", G::SoftwareCreationAndManagement,
       {"validation", "verification", "testing"}, ""},
  });
  return tax;
}

}  // namespace skillgap
