#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "skillgap/fuzzy_match.hpp"
#include "skillgap/html.hpp"
#include "test_paths.hpp"

using namespace skillgap;
using namespace skillgap::html;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_text(std::string_view page, std::string_view selector) {
  const Document doc(page);
  const auto hit = Selector(selector).select_first(doc);
  return hit ? doc.text_content(*hit) : "<none>";
}

}  // namespace

TEST(Entities, NamedAndNumeric) {
  EXPECT_EQ(decode_entities("a &amp; b &lt;c&gt; &#65;&#x42; &pound;5 &unknown; &"), "a & b <c> AB \xC2\xA3" "5 &unknown; &");
}

TEST(Document, TextContentCollapsesWhitespace) {
  EXPECT_EQ(first_text("<div><p>one\n  two</p><p>three</p></div>", "div"), "one two three");
  EXPECT_EQ(first_text("<p>a<b>b</b>c</p>", "p"), "abc");
  EXPECT_EQ(first_text("<div>x<br>y</div>", "div"), "x y");
}

TEST(Document, ScriptAndStyleAreRawText) {
  const std::string page = "<script>if (a < b) { x = '<p class=t>no</p>'; }</script><p class=t>yes</p>";
  EXPECT_EQ(first_text(page, "p.t"), "yes");
}

TEST(Document, ImplicitCloses) {
  const std::string page = "<ul><li>one<li>two</ul><p>a<p>b";
  EXPECT_EQ(first_text(page, "ul"), "one two");
  EXPECT_EQ(first_text(page, "ul > li"), "one");
  EXPECT_EQ(first_text(page, "p"), "a");
  const Document doc(page);
  const auto ul = Selector("ul").select_first(doc);
  ASSERT_TRUE(ul);
  EXPECT_EQ(doc.node(*ul).children.size(), 2u);
}

TEST(Selector, TypeIdClassAttr) {
  const std::string page = R"(<div id="main" class="a b"><span data-k="x-y z">s</span><em lang=en>e</em></div>)";
  EXPECT_EQ(first_text(page, "#main span"), "s");
  EXPECT_EQ(first_text(page, "div.a.b > em"), "e");
  EXPECT_EQ(first_text(page, ".c"), "<none>");
  EXPECT_EQ(first_text(page, "[data-k]"), "s");
  EXPECT_EQ(first_text(page, "[data-k~=z]"), "s");
  EXPECT_EQ(first_text(page, "[data-k^=x-]"), "s");
  EXPECT_EQ(first_text(page, "[data-k$=z]"), "s");
  EXPECT_EQ(first_text(page, "[data-k*='y z']"), "s");
  EXPECT_EQ(first_text(page, "[lang=fr], em"), "e");
  EXPECT_EQ(first_text(page, "body > em"), "<none>");
  EXPECT_EQ(first_text(page, "*"), "se");
}

TEST(Selector, SyntaxErrors) {
  EXPECT_THROW(Selector(""), ArgumentError);
  EXPECT_THROW(Selector("div >"), ArgumentError);
  EXPECT_THROW(Selector("[unterminated"), ArgumentError);
  EXPECT_THROW(Selector("a,,b"), ArgumentError);
}

TEST(Extract, FixturePage) {
  const auto page = slurp(fixture("listing.html"));
  const auto cfg = parse_extract_config(nlohmann::json::parse(slurp(fixture("listing_config.json"))));
  const auto job = extract_job_from_html(page, cfg);
  EXPECT_EQ(job.title, "Senior Backend Developer");
  EXPECT_EQ(job.location, "Leeds (Hybrid)");
  EXPECT_EQ(job.city, "Leeds");
  EXPECT_EQ(job.nature, WorkNature::Hybrid);
  EXPECT_EQ(job.family, JobFamily::Developer);
  EXPECT_EQ(job.salary_text, "\xC2\xA3" "55,000 \xE2\x80\x93 \xC2\xA3" "65,000");
  EXPECT_EQ(job.description,
            "We build payment services in C# and ASP.NET, with CI/CD through GitHub. Experience with SQL & Docker is "
            "a plus. Two office days a week. Kubernetes Agile teams");
  EXPECT_EQ(job.id, content_id(page));
  EXPECT_EQ(job.id.size(), 21u);
  EXPECT_EQ(extract_job_from_html(page, cfg, "given").id, "given");

  std::vector<std::string> kws;
  for (const auto& h : match_keywords(normalize(job.description), default_taxonomy(), 0.95)) kws.push_back(h.keyword);
  EXPECT_EQ(kws, (std::vector<std::string>{"c#", "asp.net", "ci/cd", "github", "sql", "docker", "kubernetes", "agile"}));
}

TEST(Extract, MissingMandatoryNodes) {
  const HtmlExtractConfig cfg{"h1.none", std::nullopt, std::nullopt, "p"};
  try {
    extract_job_from_html("<p>x</p>", cfg);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()), "title: no match for selector 'h1.none'");
  }
  const HtmlExtractConfig cfg2{"p", std::nullopt, std::nullopt, "section"};
  EXPECT_THROW(extract_job_from_html("<p>x</p>", cfg2), InputError);
  const HtmlExtractConfig cfg3{"p", std::string("nav"), std::string("b"), "p"};
  const auto job = extract_job_from_html("<p>Engineer</p>", cfg3);
  EXPECT_EQ(job.location, "");
  EXPECT_EQ(job.city, std::nullopt);
  EXPECT_EQ(job.salary_text, std::nullopt);
}

TEST(Extract, ConfigValidation) {
  EXPECT_THROW(parse_extract_config(nlohmann::json::parse(R"({"description": "p"})")), InputError);
  EXPECT_THROW(parse_extract_config(nlohmann::json::parse(R"({"title": "h1"})")), InputError);
  EXPECT_THROW(parse_extract_config(nlohmann::json::parse(R"({"title": "h1", "description": 3})")), InputError);
  EXPECT_THROW(parse_extract_config(nlohmann::json::parse(R"({"title": "h1 >", "description": "p"})")), ArgumentError);
  EXPECT_THROW(parse_extract_config(nlohmann::json::array()), InputError);
}
