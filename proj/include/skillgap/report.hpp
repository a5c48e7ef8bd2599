#pragma once

// Rendering of analysis results as CSV, Markdown and SVG bar charts. Every
// function is pure; identical inputs give byte-identical text.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "skillgap/csv.hpp"
#include "skillgap/gap_analysis.hpp"
#include "skillgap/module_trends.hpp"
#include "skillgap/stat_tests.hpp"

namespace skillgap::report {

struct Header {
  std::string denominator;
  double threshold = 0.0;
  std::string generated;

  std::string body() const { return fmt::format("denominator={} threshold={} generated={}", denominator, threshold, generated); }
  std::string csv() const { return "# " + body() + "\n"; }
  std::string markup() const { return "<!-- " + body() + " -->\n"; }
};

inline std::string pct2(double v) { return fmt::format("{:.2f}", v); }
inline std::string exact(double v) { return fmt::format("{}", v); }

inline std::string md_row(const std::vector<std::string>& cells) {
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  return out + "\n";
}

inline std::string md_table(const std::vector<std::string>& head, const std::vector<std::vector<std::string>>& rows) {
  std::string out = md_row(head);
  out += "|";
  for (std::size_t i = 0; i < head.size(); ++i) out += i == 0 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& r : rows) out += md_row(r);
  return out;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

struct BarSeries {
  std::string name;
  std::string color;
  std::vector<double> values;
};

/// Horizontal bar chart on a fixed 800x500 canvas, one row per label.
inline std::string bar_chart_svg(const std::string& title, const std::vector<std::string>& labels,
                                 const std::vector<BarSeries>& series, const Header& header,
                                 std::string_view unit = "%") {
  constexpr double width = 800, height = 500;
  constexpr double left = 260, right = 60, top = 50, bottom = 40;
  double max_v = 0;
  for (const auto& s : series) {
    for (double v : s.values) max_v = std::max(max_v, v);
  }
  if (max_v <= 0) max_v = 1;
  const double plot_w = width - left - right;
  const double row_h = labels.empty() ? 0 : (height - top - bottom) / static_cast<double>(labels.size());
  const double bar_h = series.empty() ? 0 : row_h * 0.8 / static_cast<double>(series.size());

  std::string out = header.markup();
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      width, height);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>\n", width, height);
  out += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n", width / 2,
                     xml_escape(title));
  out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top,
                     height - bottom);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double y0 = top + row_h * static_cast<double>(i) + row_h * 0.1;
    out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", left - 6,
                       y0 + row_h * 0.4 + 4, xml_escape(labels[i]));
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = i < series[s].values.size() ? series[s].values[i] : 0.0;
      const double w = plot_w * v / max_v;
      const double y = y0 + bar_h * static_cast<double>(s);
      out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"/>\n", left, y,
                         w, bar_h, series[s].color);
      out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}{}</text>\n", left + w + 4, y + bar_h / 2 + 4, pct2(v),
                         unit);
    }
  }
  if (series.size() > 1) {
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double x = left + 10 + 170 * static_cast<double>(s);
      out += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", x,
                         height - 26, series[s].color);
      out += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", x + 16, height - 16, xml_escape(series[s].name));
    }
  }
  out += "</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// Job coverage (table7) and keyword frequency (fig3 / fig4)

/// Categories by descending coverage; ties keep taxonomy order.
inline std::vector<CategoryProfile> sorted_by_coverage(std::vector<CategoryProfile> cats) {
  std::stable_sort(cats.begin(), cats.end(),
                   [](const auto& a, const auto& b) { return a.covered_docs > b.covered_docs; });
  return cats;
}

inline std::string coverage_csv(const JobCoverage& cov, const Header& h) {
  std::string out = h.csv();
  out += csv::format_record({"category", "abbreviation", "coverage_pct", "coverage_pct_exact", "covered_docs",
                             "total_mentions"});
  for (const auto& c : sorted_by_coverage(cov.categories)) {
    out += csv::format_record({c.category_name, c.category_abbr, pct2(c.doc_coverage_pct), exact(c.doc_coverage_pct),
                               std::to_string(c.covered_docs), std::to_string(c.total_mentions)});
  }
  return out;
}

inline std::string coverage_md(const JobCoverage& cov, const Header& h) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : sorted_by_coverage(cov.categories)) {
    rows.push_back({c.category_name, pct2(c.doc_coverage_pct) + "%", std::to_string(c.total_mentions)});
  }
  return h.markup() + "\n" +
         md_table({"Skill Category", "% of Job Descriptions Mentioning Category", "Total Skill Mentions"}, rows);
}

inline std::string keyword_csv(const std::vector<KeywordFrequency>& freq, const Header& h) {
  std::string out = h.csv();
  out += csv::format_record({"keyword", "docs", "pct", "pct_exact"});
  for (const auto& f : freq) out += csv::format_record({f.keyword, std::to_string(f.docs), pct2(f.pct), exact(f.pct)});
  return out;
}

inline std::string keyword_svg(const std::string& title, const std::vector<KeywordFrequency>& freq, const Header& h) {
  std::vector<std::string> labels;
  BarSeries s{"share of adverts", "#4C72B0", {}};
  for (const auto& f : freq) {
    labels.push_back(f.keyword);
    s.values.push_back(f.pct);
  }
  return bar_chart_svg(title, labels, {s}, h);
}

// ---------------------------------------------------------------------------
// Curriculum distribution (table5 / table6) and module ranking (fig2)

inline std::string distribution_csv(const CurriculumDistribution& d, const Header& h) {
  std::vector<std::size_t> order(d.module_pct.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.module_counts[a] > d.module_counts[b]; });
  std::string out = h.csv();
  out += csv::format_record({"category", "abbreviation", "module_pct", "module_pct_exact", "modules"});
  out += csv::format_record({"Software Engineering modules (pooled)", "", pct2(d.se_share_pct), exact(d.se_share_pct),
                             std::to_string(d.se_modules)});
  out += csv::format_record({"Software Engineering modules (programme mean)", "", pct2(d.se_share_programme_mean_pct),
                             exact(d.se_share_programme_mean_pct), ""});
  for (auto i : order) {
    out += csv::format_record({d.category_names[i], d.category_abbrs[i], pct2(d.module_pct[i]), exact(d.module_pct[i]),
                               std::to_string(d.module_counts[i])});
  }
  return out;
}

inline std::string distribution_md(const CurriculumDistribution& d, const Header& h) {
  std::vector<std::size_t> order(d.module_pct.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return d.module_counts[a] > d.module_counts[b]; });
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Software Engineering modules (pooled, out of all curricula)", pct2(d.se_share_pct) + "%"});
  rows.push_back({"Software Engineering modules (mean per programme)", pct2(d.se_share_programme_mean_pct) + "%"});
  for (auto i : order) rows.push_back({d.category_names[i], pct2(d.module_pct[i]) + "%"});
  return h.markup() + "\n" + md_table({"Category", "Percentage of total modules"}, rows);
}

inline std::string split_csv(const CurriculumDistribution& top, const CurriculumDistribution& bottom, std::size_t k,
                             const Header& h) {
  std::string out = h.csv();
  out += fmt::format("# k={} top_denominator={} bottom_denominator={}\n", k, top.total_modules, bottom.total_modules);
  out += csv::format_record({"category", "abbreviation", "top_pct", "top_pct_exact", "bottom_pct", "bottom_pct_exact"});
  for (std::size_t i = 0; i < top.category_abbrs.size(); ++i) {
    out += csv::format_record({top.category_names[i], top.category_abbrs[i], pct2(top.module_pct[i]),
                               exact(top.module_pct[i]), pct2(bottom.module_pct[i]), exact(bottom.module_pct[i])});
  }
  out += csv::format_record({"Software Engineering modules (pooled)", "", pct2(top.se_share_pct),
                             exact(top.se_share_pct), pct2(bottom.se_share_pct), exact(bottom.se_share_pct)});
  out += csv::format_record({"Software Engineering modules (programme mean)", "", pct2(top.se_share_programme_mean_pct),
                             exact(top.se_share_programme_mean_pct), pct2(bottom.se_share_programme_mean_pct),
                             exact(bottom.se_share_programme_mean_pct)});
  return out;
}

inline std::string split_md(const CurriculumDistribution& top, const CurriculumDistribution& bottom, std::size_t k,
                            const Header& h) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < top.category_abbrs.size(); ++i) {
    rows.push_back({top.category_names[i], pct2(top.module_pct[i]), pct2(bottom.module_pct[i])});
  }
  rows.push_back({"Software Engineering modules (pooled)", pct2(top.se_share_pct), pct2(bottom.se_share_pct)});
  rows.push_back({"Software Engineering modules (mean per programme)", pct2(top.se_share_programme_mean_pct),
                  pct2(bottom.se_share_programme_mean_pct)});
  return h.markup() + "\n" +
         md_table({"Category", fmt::format("Top {} Universities (%)", k), fmt::format("Bottom {} Universities (%)", k)},
                  rows);
}

inline std::string ranking_csv(const ModuleRanking& r, const Header& h) {
  std::string out = h.csv();
  out += csv::format_record({"rank", "module", "count"});
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    out += csv::format_record({std::to_string(i + 1), r.entries[i].first, std::to_string(r.entries[i].second)});
  }
  return out;
}

inline std::string ranking_svg(const ModuleRanking& r, const Header& h) {
  std::vector<std::string> labels;
  BarSeries s{"modules", "#55A868", {}};
  for (const auto& [name, count] : r.entries) {
    labels.push_back(name);
    s.values.push_back(static_cast<double>(count));
  }
  return bar_chart_svg("Most common modules", labels, {s}, h, "");
}

// ---------------------------------------------------------------------------
// Gap map (table8 / fig5)

inline std::string gap_csv(const std::vector<GapRecord>& recs, double tau, const Header& h) {
  std::string out = h.csv();
  out += fmt::format("# tau={}\n", tau);
  out += csv::format_record({"category", "abbreviation", "curriculum_pct", "job_pct", "gap_ratio", "alignment",
                             "curriculum_pct_exact", "job_pct_exact"});
  for (const auto& r : recs) {
    out += csv::format_record({r.category_name, r.category_abbr, pct2(r.curriculum_pct), pct2(r.job_pct_normalized),
                               fmt::format("{:.4f}", r.gap_ratio), std::string(to_string(r.alignment)),
                               exact(r.curriculum_pct), exact(r.job_pct_normalized)});
  }
  return out;
}

inline std::string gap_md(const std::vector<GapRecord>& recs, double tau, const Header& h) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : recs) {
    rows.push_back({r.category_name, pct2(r.curriculum_pct), pct2(r.job_pct_normalized),
                    fmt::format("{:+.4f}", r.gap_ratio), std::string(to_string(r.alignment))});
  }
  return h.markup() + fmt::format("<!-- tau={} -->\n\n", tau) +
         md_table({"Category", "Curriculum %", "Job Ads %", "Gap ratio", "Alignment"}, rows);
}

inline std::string gap_fig_csv(const std::vector<GapRecord>& recs, const Header& h) {
  std::string out = h.csv();
  out += csv::format_record({"category", "curriculum_pct", "job_pct"});
  for (const auto& r : recs) {
    out += csv::format_record({r.category_name, exact(r.curriculum_pct), exact(r.job_pct_normalized)});
  }
  return out;
}

inline std::string gap_svg(const std::vector<GapRecord>& recs, const Header& h) {
  std::vector<std::string> labels;
  BarSeries cur{"Curriculum %", "#4C72B0", {}}, job{"Job adverts % (normalised)", "#DD8452", {}};
  for (const auto& r : recs) {
    labels.push_back(r.category_name);
    cur.values.push_back(r.curriculum_pct);
    job.values.push_back(r.job_pct_normalized);
  }
  return bar_chart_svg("Skill categories: curriculum vs job adverts", labels, {cur, job}, h);
}

// ---------------------------------------------------------------------------
// Stats (table9 / table10 / chi2.md)

inline std::string nature_csv(const std::vector<std::size_t>& counts, const Header& h) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  std::string out = h.csv();
  out += csv::format_record({"nature", "count", "pct", "pct_exact"});
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double pct = total ? 100.0 * static_cast<double>(counts[i]) / static_cast<double>(total) : 0.0;
    out += csv::format_record({std::string(to_string(kAllNatures[i])), std::to_string(counts[i]), pct2(pct), exact(pct)});
  }
  return out;
}

inline std::string contingency_csv(const ContingencyTable& t, std::string_view row_header, const Header& h) {
  std::string out = h.csv();
  csv::Record head{std::string(row_header)};
  for (const auto& c : t.col_labels()) head.push_back(c);
  head.push_back("total");
  out += csv::format_record(head);
  for (std::size_t r = 0; r < t.rows(); ++r) {
    csv::Record rec{t.row_labels()[r]};
    for (auto v : t.counts()[r]) rec.push_back(std::to_string(v));
    rec.push_back(std::to_string(t.row_totals()[r]));
    out += csv::format_record(rec);
  }
  return out;
}

inline std::string format_p(double p) {
  return p >= 1e-4 ? fmt::format("{:.4f}", p) : fmt::format("{:.2e}", p);
}

inline std::string chi_square_md(const std::string& title, const ContingencyTable& t, const ChiSquareResult& r) {
  std::string out = "## " + title + "\n\n";
  out += fmt::format("statistic={:.2f} df={} p={}\n\n", r.statistic, r.df, format_p(r.p_value));
  std::vector<std::string> head{""};
  for (const auto& c : t.col_labels()) head.push_back(c);
  std::vector<std::vector<std::string>> observed, expected;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    std::vector<std::string> o{t.row_labels()[i]}, e{t.row_labels()[i]};
    for (std::size_t j = 0; j < t.cols(); ++j) {
      o.push_back(std::to_string(t.counts()[i][j]));
      e.push_back(fmt::format("{:.2f}", r.expected[i][j]));
    }
    observed.push_back(std::move(o));
    expected.push_back(std::move(e));
  }
  out += "Observed:\n\n" + md_table(head, observed) + "\nExpected:\n\n" + md_table(head, expected) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Reading emitted tables back

struct CsvTable {
  std::map<std::string, std::string> comments;  // key=value pairs from '#' lines
  std::vector<std::string> header;
  std::vector<csv::Record> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

/// Parses any CSV written by this module ('#' comment lines first).
inline CsvTable parse_table(std::string_view text) {
  CsvTable t;
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos + 1, nl - pos - 1);
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      const auto st = i;
      while (i < line.size() && line[i] != ' ') ++i;
      const auto kv = line.substr(st, i - st);
      if (auto eq = kv.find('='); eq != std::string_view::npos) {
        t.comments[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
      }
    }
    pos = nl + 1;
  }
  csv::Reader reader(text.substr(std::min(pos, text.size())));
  auto head = reader.next();
  if (!head) throw InputError("table: missing header row");
  t.header = head->fields;
  while (auto rec = reader.next()) {
    if (reader.failed()) throw InputError("table: " + reader.error());
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;
    if (rec->fields.size() != t.header.size()) {
      throw InputError("table: line " + std::to_string(rec->line) + " has " + std::to_string(rec->fields.size()) +
                       " fields, expected " + std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(rec->fields));
  }
  return t;
}

/// Category shares from a table: rows with an abbreviation, value taken from
/// `<value>_exact` when present, else `<value>`.
inline std::vector<CategoryShare> shares_from_table(const CsvTable& t, const std::string& value) {
  const auto abbr = t.column("abbreviation");
  const auto name = t.column("category");
  auto col = t.column(value + "_exact");
  if (!col) col = t.column(value);
  if (!abbr || !col) throw InputError("table: expected columns 'abbreviation' and '" + value + "'");
  std::vector<CategoryShare> out;
  for (const auto& r : t.rows) {
    if (r[*abbr].empty()) continue;
    double v = 0;
    try {
      v = std::stod(r[*col]);
    } catch (const std::exception&) {
      throw InputError("table: bad number '" + r[*col] + "' for " + r[*abbr]);
    }
    out.push_back({r[*abbr], name ? r[*name] : r[*abbr], v});
  }
  if (out.empty()) throw InputError("table: no category rows");
  return out;
}

}  // namespace skillgap::report
