#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "skillgap/stat_tests.hpp"
#include "test_paths.hpp"

using namespace skillgap;

namespace {

std::vector<JobPosting> fixture_jobs() { return load_jobs(fixture("jobs_300.csv"), JobFormat::CSV).postings; }

}  // namespace

TEST(Table, TotalsAndValidation) {
  const ContingencyTable t({"a", "b"}, {"x", "y", "z"}, {{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(t.row_totals(), (std::vector<std::uint64_t>{6, 15}));
  EXPECT_EQ(t.col_totals(), (std::vector<std::uint64_t>{5, 7, 9}));
  EXPECT_EQ(t.grand_total(), 21u);
  EXPECT_THROW(ContingencyTable({"a"}, {"x", "y"}, {{1, 2}}), ArgumentError);
  EXPECT_THROW(ContingencyTable({"a", "b"}, {"x"}, {{1}, {2}}), ArgumentError);
  EXPECT_THROW(ContingencyTable({"a", "b"}, {"x", "y"}, {{0, 0}, {0, 0}}), ArgumentError);
  EXPECT_THROW(ContingencyTable({"a", "b"}, {"x", "y"}, {{1, 2}, {3}}), ArgumentError);
}

TEST(ChiSquare, AgainstHandComputation) {
  const std::vector<std::vector<double>> obs = {{110, 41, 37}, {48, 36, 21}};
  const ContingencyTable t({"Engineer", "Developer"}, {"Onsite", "Remote", "Hybrid"}, {{110, 41, 37}, {48, 36, 21}});
  const auto r = chi_square(t);
  double stat = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double e = oracle::expected(obs, i, j);
      EXPECT_NEAR(r.expected[i][j], e, 1e-12);
      stat += (obs[i][j] - e) * (obs[i][j] - e) / e;
    }
  }
  EXPECT_NEAR(r.statistic, stat, 1e-12);
  EXPECT_EQ(r.df, 2);
  EXPECT_NEAR(r.p_value, oracle::chisq_sf_df2(stat), 1e-12);
  EXPECT_NEAR(r.statistic, 6.04035, 1e-4);
}

TEST(ChiSquare, IndependentTableScoresZero) {
  const ContingencyTable t({"a", "b"}, {"x", "y"}, {{10, 20}, {20, 40}});
  const auto r = chi_square(t);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
}

TEST(ChiSquare, ZeroExpectedCellIsReported) {
  const ContingencyTable t({"a", "b"}, {"x", "y"}, {{0, 5}, {0, 7}});
  try {
    chi_square(t);
    FAIL();
  } catch (const ArgumentError& e) {
    EXPECT_NE(std::string(e.what()).find("(a, x)"), std::string::npos) << e.what();
  }
}

TEST(Survival, ClosedForms) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    ASSERT_NEAR(chisq_sf(x, 2), oracle::chisq_sf_df2(x), 1e-12);
    ASSERT_NEAR(chisq_sf(x, 1), oracle::chisq_sf_df1(x), 1e-12);
    ASSERT_NEAR(chisq_sf(x, 4), std::exp(-x / 2) * (1 + x / 2), 1e-12);
    ASSERT_NEAR(chisq_sf(x, 3), oracle::chisq_sf_df1(x) + std::sqrt(2 * x / M_PI) * std::exp(-x / 2), 1e-12);
  }
}

TEST(Survival, TailAndRelativeAccuracy) {
  EXPECT_DOUBLE_EQ(chisq_sf(0.0, 5), 1.0);
  const double tail = chisq_sf(182.12, 20);
  EXPECT_GT(tail, 3.0e-28);
  EXPECT_LT(tail, 4.5e-28);
  for (double x : {50.0, 100.0, 300.0}) {
    EXPECT_NEAR(chisq_sf(x, 2) / std::exp(-x / 2), 1.0, 1e-12) << x;
  }
  double prev = 1.0;
  for (double x = 0.5; x < 80; x += 0.5) {
    const double p = chisq_sf(x, 7);
    ASSERT_LT(p, prev);
    prev = p;
  }
}

TEST(Survival, Errors) {
  EXPECT_THROW(chisq_sf(-1.0, 2), ArgumentError);
  EXPECT_THROW(chisq_sf(1.0, 0), ArgumentError);
  EXPECT_THROW(chisq_sf(NAN, 1), ArgumentError);
  EXPECT_THROW(gamma_q(0.0, 1.0), ArgumentError);
  EXPECT_THROW(chisq_sf(2e8 - 20, 200000000), ConvergenceError);
}

TEST(Contingency, FamilyFromFixture) {
  const auto jobs = fixture_jobs();
  const auto t = contingency(jobs, RowAttribute::Family);
  EXPECT_EQ(t.row_labels(), (std::vector<std::string>{"Engineer", "Developer"}));
  EXPECT_EQ(t.col_labels(), (std::vector<std::string>{"Onsite", "Remote", "Hybrid"}));
  EXPECT_EQ(t.counts(), (std::vector<std::vector<std::uint64_t>>{{110, 41, 37}, {48, 36, 21}}));
  const auto with_other = contingency(jobs, RowAttribute::Family, {0, false});
  ASSERT_EQ(with_other.rows(), 3u);
  EXPECT_EQ(with_other.counts()[2], (std::vector<std::uint64_t>{5, 1, 1}));
  EXPECT_EQ(nature_distribution(jobs), (std::vector<std::size_t>{163, 78, 59}));
}

TEST(Contingency, CityFromFixture) {
  const auto jobs = fixture_jobs();
  const auto t = contingency(jobs, RowAttribute::City, {5, true});
  ASSERT_EQ(t.rows(), 11u);
  EXPECT_EQ(t.row_labels()[0], "London");
  EXPECT_EQ(t.counts()[0], (std::vector<std::uint64_t>{59, 1, 13}));
  for (std::size_t r = 1; r < t.rows(); ++r) EXPECT_GE(t.row_totals()[r - 1], t.row_totals()[r]);
  const auto res = chi_square(t);
  EXPECT_EQ(res.df, 20);
  EXPECT_NEAR(res.statistic, 182.12, 0.5);
  EXPECT_GT(res.p_value, 3.0e-28);
  EXPECT_LT(res.p_value, 4.5e-28);

  const auto all = contingency(jobs, RowAttribute::City, {0, false});
  EXPECT_EQ(all.rows(), 20u);
  EXPECT_EQ(all.grand_total(), 300u);
  EXPECT_EQ(all.row_labels()[0], "London");
  EXPECT_EQ(all.row_labels()[1], "Unknown");
}

TEST(Contingency, DegenerateAfterFiltering) {
  const auto jobs = fixture_jobs();
  EXPECT_THROW(contingency(jobs, RowAttribute::City, {74, true}), ArgumentError);
  EXPECT_THROW(contingency({}, RowAttribute::Family), ArgumentError);
}
