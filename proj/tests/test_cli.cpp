#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "skillgap/cli.hpp"
#include "test_paths.hpp"

namespace fs = std::filesystem;
using namespace skillgap;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "skillgap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("skillgap_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out() const { return (dir_ / "out").string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kExitInput);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kExitInput);
  EXPECT_EQ(run({"stats", "--no-such-flag"}).code, cli::kExitInput);
  EXPECT_EQ(run({"--help"}).code, cli::kExitOk);
  const auto missing = run({"stats", "--out", out()});
  EXPECT_EQ(missing.code, cli::kExitInput);
  EXPECT_NE(missing.err.find("no jobs file"), std::string::npos) << missing.err;
  EXPECT_EQ(run({"stats", "--jobs", "/nonexistent.csv", "--out", out()}).code, cli::kExitInput);
  EXPECT_EQ(run({"stats", "--jobs", fixture("jobs_300.csv"), "--threshold", "1.5"}).code, cli::kExitInput);
  EXPECT_EQ(run({"stats", "--jobs", fixture("jobs_300.csv"), "--date", "2024-13-40"}).code, cli::kExitInput);
  EXPECT_EQ(run({"stats", "--jobs", fixture("jobs_300.csv"), "--workers", "0"}).code, cli::kExitInput);
}

TEST_F(Cli, AnalyzeJobs) {
  const auto r = run({"analyze-jobs", "--jobs", fixture("jobs_106.csv"), "--out", out(), "--date", "2024-05-01"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t7 = slurp(fs::path(out()) / "table7.csv");
  EXPECT_EQ(t7.rfind("# denominator=106 threshold=0.95 generated=2024-05-01\n", 0), 0u);
  EXPECT_NE(t7.find("DES,88.68,"), std::string::npos) << t7;
  EXPECT_NE(t7.find(",94,547\n"), std::string::npos);
  const auto fig3 = report::parse_table(slurp(fs::path(out()) / "fig3.csv"));
  EXPECT_EQ(fig3.rows[0][0], "javascript");
  EXPECT_EQ(fig3.rows[0][2], "30.19");
  const auto fig4 = report::parse_table(slurp(fs::path(out()) / "fig4.csv"));
  EXPECT_EQ(fig4.rows[0][0], "react");
  EXPECT_EQ(fig4.rows[0][2], "19.81");
  for (const char* f : {"table7.md", "fig3.svg", "fig4.svg"}) EXPECT_TRUE(fs::exists(fs::path(out()) / f)) << f;
}

TEST_F(Cli, RejectedRowsWarnButSucceed) {
  const auto jobs = dir_ / "jobs.csv";
  std::ofstream(jobs) << "id,title,description\n1,Dev,python\n1,Dev,dup\n2,Dev,\n";
  const auto r = run({"analyze-jobs", "--jobs", jobs.string(), "--out", out()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("2 row(s) rejected"), std::string::npos) << r.err;
  std::ofstream(jobs) << "id,title,description\n1,Dev,\n";
  EXPECT_EQ(run({"analyze-jobs", "--jobs", jobs.string(), "--out", out()}).code, cli::kExitInput);
}

TEST_F(Cli, AnalyzeCurriculaSkipsSplitWhenTooFew) {
  const auto r = run({"analyze-curricula", "--curricula", fixture("curricula_30.json"), "--out", out(), "--k", "16"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("table6 skipped"), std::string::npos);
  EXPECT_FALSE(fs::exists(fs::path(out()) / "table6.csv"));
  EXPECT_TRUE(fs::exists(fs::path(out()) / "table5.csv"));
  const auto fig2 = report::parse_table(slurp(fs::path(out()) / "fig2.csv"));
  EXPECT_EQ(fig2.rows[0], (csv::Record{"1", "software engineering design", "27"}));

  const auto r15 = run({"analyze-curricula", "--curricula", fixture("curricula_30.json"), "--out", out()});
  ASSERT_EQ(r15.code, 0) << r15.err;
  const auto t6 = slurp(fs::path(out()) / "table6.csv");
  EXPECT_NE(t6.find("# k=15 top_denominator=549 bottom_denominator=568"), std::string::npos);
  EXPECT_NE(t6.find("PROG,18.58,"), std::string::npos);
}

TEST_F(Cli, GapFromTables) {
  const auto job_table = dir_ / "jobs.csv";
  const auto cur_table = dir_ / "cur.csv";
  std::ofstream(job_table) << "# denominator=50\ncategory,abbreviation,coverage_pct\nAlpha,A,30\nBeta,B,10\n";
  std::ofstream(cur_table) << "category,abbreviation,module_pct\nSE,,40\nAlpha,A,50\nBeta,B,50\n";
  const auto r = run({"gap", "--job-table", job_table.string(), "--curriculum-table", cur_table.string(), "--out", out(),
                      "--tau", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = report::parse_table(slurp(fs::path(out()) / "table8.csv"));
  EXPECT_EQ(t.comments.at("denominator"), "50");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "A");
  EXPECT_EQ(t.rows[0][3], "75.00");
  EXPECT_EQ(t.rows[0][5], "Undervalued");
  EXPECT_EQ(t.rows[1][5], "Overvalued");

  std::ofstream(cur_table) << "category,abbreviation,module_pct\nAlpha,A,50\n";
  const auto bad = run({"gap", "--job-table", job_table.string(), "--curriculum-table", cur_table.string(), "--out",
                        out()});
  EXPECT_EQ(bad.code, cli::kExitInput);
  EXPECT_NE(bad.err.find("B"), std::string::npos);
}

TEST_F(Cli, Stats) {
  const auto r = run({"stats", "--jobs", fixture("jobs_300.csv"), "--out", out()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto chi = slurp(fs::path(out()) / "chi2.md");
  EXPECT_NE(chi.find("statistic=6.04 df=2 p=0.0488"), std::string::npos) << chi;
  EXPECT_NE(chi.find("df=20 p=3.7"), std::string::npos) << chi;
  EXPECT_NE(slurp(fs::path(out()) / "table10.csv").find("Developer,48,36,21,105"), std::string::npos);
  EXPECT_NE(slurp(fs::path(out()) / "table9.csv").find("Remote,78,26.00,"), std::string::npos);

  const auto degenerate = run({"stats", "--jobs", fixture("jobs_300.csv"), "--out", out(), "--min-row-total", "74"});
  ASSERT_EQ(degenerate.code, 0);
  EXPECT_NE(degenerate.err.find("degenerate"), std::string::npos);
  EXPECT_NE(slurp(fs::path(out()) / "chi2.md").find("not run: degenerate"), std::string::npos);
}

TEST_F(Cli, ConfigFileAndOverrides) {
  const auto cfg = dir_ / "run.toml";
  std::ofstream(cfg) << "[paths]\njobs = \"" << fixture("jobs_300.csv") << "\"\nout = \"cfg_out\"\n"
                     << "[stats]\nmin_row_total = 74  # too strict\n";
  auto r = run({"stats", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "cfg_out" / "chi2.md"));
  EXPECT_NE(r.err.find("degenerate"), std::string::npos);
  r = run({"stats", "--config", cfg.string(), "--min-row-total", "5", "--out", out()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.err, "");
  EXPECT_TRUE(fs::exists(fs::path(out()) / "chi2.md"));

  std::ofstream(cfg) << "[paths]\njbos = \"x\"\n";
  r = run({"stats", "--config", cfg.string()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("unknown key 'paths.jbos'"), std::string::npos) << r.err;
  std::ofstream(cfg) << "[thresholds]\njob_match = \"high\"\n";
  EXPECT_EQ(run({"stats", "--config", cfg.string()}).code, cli::kExitInput);
  EXPECT_EQ(run({"stats", "--config", (dir_ / "missing.toml").string()}).code, cli::kExitInput);
}

TEST_F(Cli, ConfigParser) {
  RunConfig cfg;
  apply_config_text(cfg, "# c\n[analysis]\nworkers = 4\n[stats]\nexclude_unlabeled = false\n[paths]\njobs = \"a b.csv\"\n",
                    "/base");
  EXPECT_EQ(cfg.workers, 4u);
  EXPECT_FALSE(cfg.exclude_unlabeled);
  EXPECT_EQ(cfg.jobs, "/base/a b.csv");
  EXPECT_THROW(apply_config_text(cfg, "[analysis]\nworkers = 1.5\n"), InputError);
  EXPECT_THROW(apply_config_text(cfg, "[analysis\n"), InputError);
  EXPECT_THROW(apply_config_text(cfg, "[paths]\njobs = \"open\n"), InputError);
  EXPECT_THROW(apply_config_text(cfg, "novalue\n"), InputError);
  const auto fixture_cfg = load_config(fixture("skillgap.toml"));
  EXPECT_EQ(fs::path(fixture_cfg.jobs), fs::path(fixture("jobs_106.csv")).lexically_normal());
  EXPECT_NO_THROW(fixture_cfg.validate());
}

TEST_F(Cli, DateFromEnvironment) {
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  const auto r = run({"stats", "--jobs", fixture("jobs_300.csv"), "--out", out()});
  ::unsetenv("SOURCE_DATE_EPOCH");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(fs::path(out()) / "table9.csv").rfind("# denominator=300 threshold=0.95 generated=1970-01-02\n", 0),
            0u);
}

TEST_F(Cli, TaxonomyMustFitNgramWindow) {
  const auto tax = dir_ / "tax.json";
  std::ofstream(tax) << R"([{"name": "X", "abbreviation": "X", "group": "Software & its engineering",
                            "keywords": ["one two three four"]}])";
  const auto cfg = dir_ / "run.toml";
  std::ofstream(cfg) << "[analysis]\nngram_max = 3\n";
  const auto r = run({"analyze-jobs", "--config", cfg.string(), "--taxonomy", tax.string(), "--jobs",
                      fixture("jobs_106.csv"), "--out", out()});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_NE(r.err.find("ngram_max"), std::string::npos) << r.err;
}

TEST_F(Cli, BinaryExitCodes) {
  const std::string bin = SKILLGAP_BIN;
  EXPECT_EQ(std::system((bin + " --help > /dev/null").c_str()), 0);
  const int status = std::system((bin + " stats --jobs /nonexistent.csv 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST_F(Cli, ExtractHtmlWritesJsonl) {
  const auto bad = dir_ / "bad.html";
  std::ofstream(bad) << "<p>no title here</p>";
  const auto jsonl = dir_ / "sub" / "jobs.jsonl";
  const auto r = run({"extract-html", "--selectors", fixture("listing_config.json"), "--output", jsonl.string(),
                      fixture("listing.html"), bad.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("skipped"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("extracted 1 of 2"), std::string::npos) << r.err;
  const auto c = load_jobs(jsonl.string(), JobFormat::JSONL);
  ASSERT_EQ(c.postings.size(), 1u);
  EXPECT_EQ(c.postings[0].title, "Senior Backend Developer");
  EXPECT_EQ(c.postings[0].city, "Leeds");

  const auto a = run({"analyze-jobs", "--jobs", jsonl.string(), "--out", out()});
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(run({"extract-html", "--selectors", "/nonexistent.json", "--output", jsonl.string(),
                 fixture("listing.html")}).code,
            cli::kExitInput);
  EXPECT_EQ(run({"extract-html", "--output", jsonl.string(), fixture("listing.html")}).code, cli::kExitInput);
}
