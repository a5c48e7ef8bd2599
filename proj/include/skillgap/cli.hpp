#pragma once

// The `skillgap` command line: analyze-jobs, analyze-curricula, gap, stats,
// all and extract-html. Exit codes: 0 success (warnings allowed), 2 configuration or input
// error, 3 numerical non-convergence.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skillgap/config.hpp"
#include "skillgap/corpus.hpp"
#include "skillgap/error.hpp"
#include "skillgap/gap_analysis.hpp"
#include "skillgap/html.hpp"
#include "skillgap/module_trends.hpp"
#include "skillgap/report.hpp"
#include "skillgap/stat_tests.hpp"
#include "skillgap/taxonomy.hpp"

namespace skillgap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

struct Context {
  RunConfig cfg;
  std::ostream& log;
};

inline std::string today_iso() {
  using namespace std::chrono;
  sys_seconds now = floor<seconds>(system_clock::now());
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    now = sys_seconds{seconds{std::strtoll(epoch, nullptr, 10)}};
  }
  return format_date(year_month_day{floor<days>(now)});
}

inline void write_output(const RunConfig& cfg, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(cfg.out);
  const auto path = std::filesystem::path(cfg.out) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("output: cannot write '" + path.string() + "'");
  f << content;
}

inline SkillTaxonomy taxonomy_for(const Context& ctx) {
  SkillTaxonomy tax = ctx.cfg.taxonomy.empty() ? default_taxonomy() : load_taxonomy(ctx.cfg.taxonomy);
  for (const auto& c : tax.categories()) {
    for (const auto& k : c.keywords) {
      if (detail::word_count(k) > ctx.cfg.ngram_max) {
        throw InputError("taxonomy: keyword '" + k + "' has more words than analysis.ngram_max=" +
                         std::to_string(ctx.cfg.ngram_max));
      }
    }
  }
  return tax;
}

inline StopwordList stopwords_for(const Context& ctx) {
  return ctx.cfg.stopwords.empty() ? default_stopwords() : load_stopwords(ctx.cfg.stopwords);
}

inline std::vector<JobPosting> jobs_for(const Context& ctx) {
  if (ctx.cfg.jobs.empty()) throw InputError("jobs: no jobs file configured (paths.jobs / --jobs)");
  auto corpus = load_jobs(ctx.cfg.jobs, job_format_for(ctx.cfg.jobs));
  for (const auto& d : corpus.rejected) ctx.log << "warning: jobs: row " << d.row << " rejected: " << d.reason << "\n";
  if (!corpus.rejected.empty()) ctx.log << "warning: jobs: " << corpus.rejected.size() << " row(s) rejected\n";
  if (corpus.postings.empty()) throw InputError("jobs: '" + ctx.cfg.jobs + "' contains no valid postings");
  return std::move(corpus.postings);
}

inline std::vector<CurriculumProgram> curricula_for(const Context& ctx) {
  if (ctx.cfg.curricula.empty()) throw InputError("curricula: no curricula file configured (paths.curricula / --curricula)");
  auto set = load_curricula(ctx.cfg.curricula);
  for (const auto& d : set.rejected) ctx.log << "warning: curricula: entry " << d.row << ": " << d.reason << "\n";
  if (set.programs.empty()) throw InputError("curricula: '" + ctx.cfg.curricula + "' contains no programmes");
  return std::move(set.programs);
}

inline std::vector<std::string> category_keywords(const SkillTaxonomy& tax, std::string_view abbr) {
  const auto* c = tax.find(abbr);
  return c ? c->keywords : std::vector<std::string>{};
}

// ---------------------------------------------------------------------------

inline void cmd_analyze_jobs(const Context& ctx) {
  const auto tax = taxonomy_for(ctx);
  const auto stops = stopwords_for(ctx);
  const auto jobs = jobs_for(ctx);
  const DocumentMatcher matcher(tax, stops, ctx.cfg.job_match, ctx.cfg.workers);
  const auto per_doc = matcher.hits_all(descriptions(jobs));
  const auto cov = coverage_from_hits(per_doc, tax);
  for (const auto& c : cov.categories) {
    // Coverage counts documents, so pct * N / 100 must be a whole number.
    const double docs = c.doc_coverage_pct * static_cast<double>(cov.doc_count) / 100.0;
    if (std::abs(docs - static_cast<double>(c.covered_docs)) > 1e-6) {
      throw Error("internal: coverage of " + c.category_abbr + " is not a document count");
    }
  }
  const report::Header h{std::to_string(cov.doc_count), ctx.cfg.job_match, ctx.cfg.generated};
  write_output(ctx.cfg, "table7.csv", report::coverage_csv(cov, h));
  write_output(ctx.cfg, "table7.md", report::coverage_md(cov, h));

  const std::pair<const char*, const char*> figs[] = {{"fig3", "PROG"}, {"fig4", "FRWK"}};
  for (const auto& [fig, abbr] : figs) {
    const auto keywords = category_keywords(tax, abbr);
    if (keywords.empty()) {
      ctx.log << "warning: analyze-jobs: taxonomy has no " << abbr << " category; " << fig << " skipped\n";
      continue;
    }
    const auto freq = keyword_frequency_from_hits(per_doc, keywords);
    const std::string title = std::string(abbr) == "PROG" ? "Programming languages in job adverts"
                                                          : "Development frameworks in job adverts";
    write_output(ctx.cfg, std::string(fig) + ".csv", report::keyword_csv(freq, h));
    write_output(ctx.cfg, std::string(fig) + ".svg", report::keyword_svg(title, freq, h));
  }
}

inline void cmd_analyze_curricula(const Context& ctx) {
  const auto tax = taxonomy_for(ctx);
  const auto stops = stopwords_for(ctx);
  const auto programs = curricula_for(ctx);
  const DocumentMatcher matcher(tax, stops, ctx.cfg.job_match, ctx.cfg.workers);
  const auto dist = curriculum_distribution(programs, matcher);
  const report::Header h{std::to_string(dist.total_modules), ctx.cfg.job_match, ctx.cfg.generated};
  write_output(ctx.cfg, "table5.csv", report::distribution_csv(dist, h));
  write_output(ctx.cfg, "table5.md", report::distribution_md(dist, h));

  const auto k = ctx.cfg.split_k;
  if (programs.size() < 2 * k) {
    ctx.log << "warning: analyze-curricula: " << programs.size() << " programmes is fewer than 2k=" << 2 * k
            << "; table6 skipped\n";
    std::filesystem::remove(std::filesystem::path(ctx.cfg.out) / "table6.csv");
    std::filesystem::remove(std::filesystem::path(ctx.cfg.out) / "table6.md");
  } else {
    const auto [top, bottom] = split_rank_compare(programs, k, matcher);
    const report::Header hs{std::to_string(top.total_modules + bottom.total_modules), ctx.cfg.job_match,
                            ctx.cfg.generated};
    write_output(ctx.cfg, "table6.csv", report::split_csv(top, bottom, k, hs));
    write_output(ctx.cfg, "table6.md", report::split_md(top, bottom, k, hs));
  }

  const auto ranking = rank_modules(programs, ctx.cfg.module_group, ctx.cfg.top_modules);
  const report::Header hr{std::to_string(ranking.total_modules), ctx.cfg.module_group, ctx.cfg.generated};
  write_output(ctx.cfg, "fig2.csv", report::ranking_csv(ranking, hr));
  write_output(ctx.cfg, "fig2.svg", report::ranking_svg(ranking, hr));
}

inline std::string read_text(const std::string& path, std::string_view what) {
  return skillgap::detail::read_file(path, what);
}

inline void cmd_gap(const Context& ctx) {
  std::vector<CategoryShare> job_side, curriculum_side;
  std::string denominator;
  std::optional<SkillTaxonomy> tax;
  std::optional<StopwordList> stops;
  auto matcher = [&] {
    if (!tax) tax = taxonomy_for(ctx);
    if (!stops) stops = stopwords_for(ctx);
    return DocumentMatcher(*tax, *stops, ctx.cfg.job_match, ctx.cfg.workers);
  };

  if (!ctx.cfg.job_table.empty()) {
    const auto t = report::parse_table(read_text(ctx.cfg.job_table, "job table"));
    auto raw = report::shares_from_table(t, "coverage_pct");
    std::vector<double> cov;
    for (const auto& s : raw) cov.push_back(s.pct);
    const auto norm = normalize_to_100(cov);
    for (std::size_t i = 0; i < raw.size(); ++i) job_side.push_back({raw[i].abbr, raw[i].name, norm[i]});
    denominator = t.comments.count("denominator") ? t.comments.at("denominator") : "unknown";
  } else {
    const auto jobs = jobs_for(ctx);
    const auto cov = job_category_coverage(jobs, matcher());
    job_side = normalized_shares(cov);
    denominator = std::to_string(cov.doc_count);
  }

  if (!ctx.cfg.curriculum_table.empty()) {
    const auto t = report::parse_table(read_text(ctx.cfg.curriculum_table, "curriculum table"));
    curriculum_side = report::shares_from_table(t, "module_pct");
  } else {
    curriculum_side = shares(curriculum_distribution(curricula_for(ctx), matcher()));
  }

  const auto recs = gap_map(curriculum_side, job_side, ctx.cfg.alignment_tau);
  const report::Header h{denominator, ctx.cfg.job_match, ctx.cfg.generated};
  write_output(ctx.cfg, "table8.csv", report::gap_csv(recs, ctx.cfg.alignment_tau, h));
  write_output(ctx.cfg, "table8.md", report::gap_md(recs, ctx.cfg.alignment_tau, h));
  write_output(ctx.cfg, "fig5.csv", report::gap_fig_csv(recs, h));
  write_output(ctx.cfg, "fig5.svg", report::gap_svg(recs, h));
}

inline void cmd_stats(const Context& ctx) {
  const auto jobs = jobs_for(ctx);
  const report::Header h{std::to_string(jobs.size()), ctx.cfg.job_match, ctx.cfg.generated};
  write_output(ctx.cfg, "table9.csv", report::nature_csv(nature_distribution(jobs), h));

  std::string md = h.markup() + "\n# Chi-square tests of independence\n\n";
  const ContingencyOptions family_opts{0, true};
  const ContingencyOptions city_opts{ctx.cfg.min_row_total, ctx.cfg.exclude_unlabeled};
  struct Test {
    const char* title;
    RowAttribute attr;
    ContingencyOptions opts;
    const char* row_header;
  };
  const Test tests[] = {{"Job family x nature of role", RowAttribute::Family, family_opts, "family"},
                        {"City x nature of role", RowAttribute::City, city_opts, "city"}};
  bool wrote_family = false;
  for (const auto& t : tests) {
    try {
      const auto table = contingency(jobs, t.attr, t.opts);
      const auto res = chi_square(table);
      md += report::chi_square_md(t.title, table, res);
      if (t.attr == RowAttribute::Family) {
        write_output(ctx.cfg, "table10.csv", report::contingency_csv(table, t.row_header, h));
        wrote_family = true;
      }
    } catch (const ArgumentError& e) {
      md += std::string("## ") + t.title + "\n\nnot run: " + e.what() + "\n\n";
      ctx.log << "warning: stats: " << t.title << ": " << e.what() << "\n";
    }
  }
  if (!wrote_family) std::filesystem::remove(std::filesystem::path(ctx.cfg.out) / "table10.csv");
  write_output(ctx.cfg, "chi2.md", md);
}

inline void cmd_all(const Context& ctx) {
  cmd_analyze_jobs(ctx);
  cmd_analyze_curricula(ctx);
  cmd_gap(ctx);
  cmd_stats(ctx);
}

// Saved listing pages -> JSONL jobs file; ids come from page content.
inline void cmd_extract_html(const std::string& selectors, const std::vector<std::string>& pages,
                             const std::string& output, std::ostream& log) {
  const auto cfg_text = detail::read_file(selectors, "selectors");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(cfg_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("selectors: " + std::string(e.what()));
  }
  const auto config = html::parse_extract_config(doc);
  std::vector<JobPosting> jobs;
  for (const auto& page : pages) {
    try {
      jobs.push_back(html::extract_job_from_html(detail::read_file(page, "page"), config));
    } catch (const InputError& e) {
      log << "warning: skipped " << page << ": " << e.what() << "\n";
    }
  }
  const auto parent = std::filesystem::path(output).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(output, std::ios::binary | std::ios::trunc);
  if (!f) throw InputError("output: cannot write '" + output + "'");
  f << write_jobs_jsonl(jobs);
  log << "extracted " << jobs.size() << " of " << pages.size() << " pages\n";
}

// ---------------------------------------------------------------------------

/// Runs one command line; never throws. Diagnostics go to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Skill-gap analysis of job adverts against university curricula", "skillgap"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> jobs, curricula, taxonomy, stopwords, out_dir, job_table, curriculum_table, date;
  std::optional<double> threshold, module_threshold, tau;
  std::optional<std::size_t> workers, k, top_modules, min_row_total;

  struct Command {
    const char* name;
    const char* help;
    std::function<void(const Context&)> fn;
  };
  const Command commands[] = {
      {"analyze-jobs", "Category coverage and keyword frequency over job adverts", cmd_analyze_jobs},
      {"analyze-curricula", "Curriculum distribution, top/bottom split and module ranking", cmd_analyze_curricula},
      {"gap", "Curriculum vs job-demand gap map", cmd_gap},
      {"stats", "Nature-of-role tables and chi-square tests", cmd_stats},
      {"all", "Run every command", cmd_all},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* s = app.add_subcommand(c.name, c.help);
    s->add_option("--config", config_path, "Run configuration file");
    s->add_option("--jobs", jobs, "Jobs file (.csv or .jsonl)");
    s->add_option("--curricula", curricula, "Curricula JSON file");
    s->add_option("--taxonomy", taxonomy, "Taxonomy JSON file");
    s->add_option("--stopwords", stopwords, "Stop-word list");
    s->add_option("--out", out_dir, "Output directory");
    s->add_option("--threshold", threshold, "Keyword match threshold");
    s->add_option("--module-threshold", module_threshold, "Module-name grouping threshold");
    s->add_option("--tau", tau, "Alignment threshold on |gap ratio|");
    s->add_option("--workers", workers, "Matching worker threads");
    s->add_option("--k", k, "Programmes per group in the top/bottom split");
    s->add_option("--top-modules", top_modules, "Modules shown in the ranking");
    s->add_option("--min-row-total", min_row_total, "Minimum postings per city row");
    s->add_option("--job-table", job_table, "gap: read job coverage from a table7 CSV");
    s->add_option("--curriculum-table", curriculum_table, "gap: read curriculum shares from a table5 CSV");
    s->add_option("--date", date, "Date stamped into output headers (YYYY-MM-DD)");
    subs.push_back(s);
  }
  std::string selectors, extract_out;
  std::vector<std::string> pages;
  auto* extract = app.add_subcommand("extract-html", "Extract job postings from saved listing pages into JSONL");
  extract->add_option("--selectors", selectors, "JSON selector config {title, city?, salary?, description}")->required();
  extract->add_option("--output", extract_out, "JSONL file to write")->required();
  extract->add_option("pages", pages, "HTML files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "skillgap: " << e.what() << "\n";
    return kExitInput;
  }

  if (extract->parsed()) {
    try {
      cmd_extract_html(selectors, pages, extract_out, err);
    } catch (const Error& e) {
      err << "skillgap extract-html: " << e.what() << "\n";
      return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
      err << "skillgap extract-html: output: " << e.what() << "\n";
      return kExitInput;
    }
    return kExitOk;
  }

  std::size_t which = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) which = i;
  }
  const auto& command = commands[which];
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (jobs) cfg.jobs = *jobs;
    if (curricula) cfg.curricula = *curricula;
    if (taxonomy) cfg.taxonomy = *taxonomy;
    if (stopwords) cfg.stopwords = *stopwords;
    if (out_dir) cfg.out = *out_dir;
    if (job_table) cfg.job_table = *job_table;
    if (curriculum_table) cfg.curriculum_table = *curriculum_table;
    if (threshold) cfg.job_match = *threshold;
    if (module_threshold) cfg.module_group = *module_threshold;
    if (tau) cfg.alignment_tau = *tau;
    if (workers) cfg.workers = *workers;
    if (k) cfg.split_k = *k;
    if (top_modules) cfg.top_modules = *top_modules;
    if (min_row_total) cfg.min_row_total = *min_row_total;
    if (date) {
      parse_date(*date);
      cfg.generated = *date;
    }
    if (cfg.generated.empty()) cfg.generated = today_iso();
    cfg.validate();
    command.fn(Context{cfg, err});
  } catch (const ConvergenceError& e) {
    err << "skillgap " << command.name << ": " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "skillgap " << command.name << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "skillgap " << command.name << ": output: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace skillgap::cli
