#include <doctest.h>

#include <random>

#include "lexaudit/report.hpp"
#include "oracles.hpp"

using namespace lexaudit;

namespace {

AuditReport two_gender(std::int64_t m, std::int64_t f, std::size_t matched, std::size_t total) {
  AuditReport r;
  r.corpus_name = "massive";
  r.dictionary_name = "combined";
  r.profile_name = "gendered_language";
  r.share = {matched, total, static_cast<double>(matched) / static_cast<double>(total)};
  r.genders = {GenderClass::masculine, GenderClass::feminine};
  ReportRow row{"overall", {{GenderClass::masculine, m}, {GenderClass::feminine, f}}, {}};
  const double t = static_cast<double>(m + f);
  row.ratios[GenderClass::masculine] = m / t;
  row.ratios[GenderClass::feminine] = f / t;
  r.rows.push_back(row);
  row.label = "train";
  r.rows.push_back(row);
  r.total_instances = m + f;
  return r;
}

}  // namespace

TEST_SUITE("report") {
  TEST_CASE("cell formats") {
    CHECK(format_ratio(93.0 / 172.0) == ".541");
    CHECK(format_ratio(79.0 / 172.0) == ".459");
    CHECK(format_ratio(1.0) == "1.000");
    CHECK(format_ratio(0.0) == ".000");
    CHECK(format_ratio(std::nullopt) == "");
    CHECK(format_share({51, 209, 51.0 / 209.0}) == "51/209 (24.4%)");
    CHECK(format_share({74, 169, 74.0 / 169.0}) == "74/169 (43.8%)");
    CHECK(format_statistic(26.7273) == "26.73");
    CHECK(format_p(2.3e-7) == "<.001");
    CHECK(format_p(0.0561) == ".056");
    CHECK(format_p(1.0) == "1.000");
  }

  TEST_CASE("CSV quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  }

  TEST_CASE("markdown audit table") {
    const auto md = render_audit(two_gender(93, 79, 51, 209), Format::markdown);
    CHECK(md.find("| Dictionary | Dict. Share | Total Instances | Partition | Masc. Freq. | Fem. Freq. | Masc. Ratio | "
                  "Fem. Ratio |") == 0);
    CHECK(md.find("| combined | 51/209 (24.4%) | 172 | overall | 93 | 79 | .541 | .459 |") != std::string::npos);
    CHECK(md.find("|  |  |  | train | 93 | 79 | .541 | .459 |") != std::string::npos);
  }

  TEST_CASE("CSV audit table repeats the dictionary columns") {
    const auto csv = render_audit(two_gender(106, 152, 74, 169), Format::csv);
    CHECK(csv.find("combined,74/169 (43.8%),258,train,106,152,.411,.589\r\n") != std::string::npos);
  }

  TEST_CASE("empty report renders the header only") {
    AuditReport r;
    r.genders = {GenderClass::masculine, GenderClass::feminine};
    const auto md = render_audit(r, Format::markdown);
    CHECK(std::count(md.begin(), md.end(), '\n') == 2);
  }

  TEST_CASE("four-class pronoun columns") {
    AuditReport r;
    r.genders = {GenderClass::masculine, GenderClass::feminine, GenderClass::neutral, GenderClass::neo};
    const auto csv = render_audit(r, Format::csv);
    CHECK(csv ==
          "Dictionary,Dict. Share,Total Instances,Partition,Masc. Freq.,Fem. Freq.,Neut. Freq.,Neo Freq.,"
          "Masc. Ratio,Fem. Ratio,Neut. Ratio,Neo Ratio\r\n");
  }

  TEST_CASE("JSON round trip is exact") {
    std::mt19937 rng(8);
    for (int i = 0; i < 50; ++i) {
      const auto inst = oracle::random_instance(rng);
      const auto r = frequency_table(run_audit(inst.corpus, inst.dictionary, inst.profile));
      const auto j = nlohmann::json::parse(render_audit(r, Format::json));
      CHECK(audit_report_from_json(j) == r);
    }
    const auto r = two_gender(93, 79, 51, 209);
    CHECK(audit_report_from_json(to_json(r)) == r);
  }

  TEST_CASE("chi-square table") {
    const LabeledChi2 rows[] = {{"masc vs fem", {26.73, 1, 2.3e-7, false}}, {"names", {3.65, 1, 0.0561, false}}};
    const auto md = render_chi2(rows, Format::markdown);
    CHECK(md.find("| masc vs fem | 26.73 | 1 | <.001 |") != std::string::npos);
    CHECK(md.find("| names | 3.65 | 1 | .056 |") != std::string::npos);
    CHECK(render_chi2({}, Format::markdown) == "| Test | Chi2 | df | p |\n| --- | --- | --- | --- |\n");
    const auto j = nlohmann::json::parse(render_chi2(rows, Format::json));
    CHECK(j[0]["p"].get<double>() == 2.3e-7);
  }

  TEST_CASE("file naming") {
    CHECK(output_filename(two_gender(1, 1, 1, 1), Format::csv) == "massive_combined_gendered_language.csv");
    auto r = two_gender(1, 1, 1, 1);
    r.dictionary_name = "a + b without AVA";
    CHECK(output_filename(r, Format::markdown) == "massive_a---b-without-AVA_gendered_language.md");
  }

  TEST_CASE("document") {
    ReportDocument doc{"T", Format::markdown, {{"audit", "x", "body\n"}}};
    CHECK(render(doc) == "# T\n\n## x (audit)\n\nbody\n");
    ReportDocument j{"T", Format::json, {{"chi2", "y", "[]"}}};
    CHECK(nlohmann::json::parse(render(j))["sections"][0]["body"].is_array());
  }
}
