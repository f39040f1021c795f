#include <doctest.h>

#include <sstream>

#include "lexaudit/error.hpp"
#include "lexaudit/lexicon.hpp"
#include "oracles.hpp"

using namespace lexaudit;

namespace {

LoadResult parse(const std::string& text, DictFormat f, std::optional<Category> c = std::nullopt) {
  std::istringstream in(text);
  LoadOptions o;
  o.name = "d";
  o.category = c;
  return parse_dictionary(in, f, o);
}

}  // namespace

TEST_SUITE("lexicon") {
  TEST_CASE("gender codes") {
    CHECK(parse_gender_code("m") == GenderClass::masculine);
    CHECK(parse_gender("feminine") == GenderClass::feminine);
    CHECK(parse_gender("neo") == GenderClass::neo);
    CHECK(gender_code(GenderClass::other) == "o");
    CHECK_THROWS_AS(parse_gender_code("x"), ValidationError);
  }

  TEST_CASE("pattern normalization") {
    CHECK(normalize_pattern("Loving", Category::gendered_language) == "love");
    CHECK(normalize_pattern("lov*", Category::gendered_language) == "lov*");
    CHECK(normalize_pattern("She", Category::gendered_language) == "");
    CHECK(normalize_pattern("She", Category::pronoun) == "she");
    CHECK(normalize_pattern("Mary", Category::name) == "mary");
  }

  TEST_CASE("categorical lists") {
    const auto r = parse(R"(## header comment
#masculine
strong
Strong
stronger
leader
#feminine
warm
the
ice cream
)",
                         DictFormat::categorical_list);
    const auto& d = r.dictionary;
    CHECK(d.total() == 4);  // strong, stronger, leader, warm
    CHECK(r.duplicates == 1);
    CHECK(r.rejected == 2);  // stop word, two words
    CHECK(d.contains("strong", GenderClass::masculine));
    CHECK(d.contains("leader", GenderClass::masculine));
    CHECK(d.entries.front().term == "strong");
    CHECK(d.categories() == std::vector<Category>{Category::gendered_language});
  }

  TEST_CASE("same pattern may carry two genders") {
    const auto d = parse("#masculine\nkind\n#feminine\nkind\n", DictFormat::categorical_list).dictionary;
    CHECK(d.total() == 2);
  }

  TEST_CASE("categorical errors") {
    CHECK_THROWS_AS(parse("strong\n", DictFormat::categorical_list), ParseError);
    CHECK_THROWS_AS(parse("#plural\nstrong\n", DictFormat::categorical_list), ParseError);
  }

  TEST_CASE("pronoun and name lists keep surface forms") {
    const auto p = parse("#masculine\nhe\nhimself\n#neo\nxe\n", DictFormat::pronoun_lists).dictionary;
    CHECK(p.total() == 3);
    CHECK(p.contains("himself", GenderClass::masculine));
    CHECK(p.entries[0].category == Category::pronoun);
    const auto n = parse("#feminine\nMary\n", DictFormat::name_lists).dictionary;
    CHECK(n.entries[0].pattern == "mary");
    CHECK(n.entries[0].category == Category::name);
  }

  TEST_CASE("gender tag JSON") {
    const auto d = parse("{\"word\":\"actress\",\"gender\":\"f\"}\n{\"word\":\"actor\",\"gender\":\"m\"}\n",
                         DictFormat::gender_tag_json)
                       .dictionary;
    CHECK(d.total() == 2);
    CHECK(d.entries[0].category == Category::marked_word);
    CHECK_THROWS_AS(parse("{\"word\":\"x\",\"gender\":\"q\"}\n", DictFormat::gender_tag_json), ValidationError);
    CHECK_THROWS_AS(parse("{\"word\":1}\n", DictFormat::gender_tag_json), ParseError);
  }

  TEST_CASE("threshold policies") {
    const auto loose = ThresholdPolicy::loose();
    const auto cons = ThresholdPolicy::conservative();
    CHECK(loose.classify(3.0) == GenderClass::feminine);
    CHECK(loose.classify(5.0) == GenderClass::masculine);
    CHECK_FALSE(loose.classify(4.0).has_value());
    CHECK_FALSE(cons.classify(2.5).has_value());
    CHECK(cons.classify(2.49) == GenderClass::feminine);
    CHECK_FALSE(cons.classify(5.5).has_value());
    CHECK(cons.classify(5.51) == GenderClass::masculine);
  }

  TEST_CASE("scored CSV through a threshold") {
    const std::string csv = "word,score\nbeautiful,1.8\nkind,2.9\nstrong,6.1\ncompete,5.2\ntable,4.0\n";
    const auto scored = parse(csv, DictFormat::scored_csv).dictionary;
    CHECK(scored.total() == 5);
    CHECK(scored.entries[0].gender == GenderClass::neutral);
    CHECK(scored.entries[0].score == 1.8);

    const auto loose = apply_threshold(scored, ThresholdPolicy::loose());
    CHECK(loose.total() == 4);
    CHECK(loose.contains("beauti", GenderClass::feminine));
    CHECK(loose.contains("compet", GenderClass::masculine));
    const auto cons = apply_threshold(scored, ThresholdPolicy::conservative());
    CHECK(cons.total() == 2);

    std::istringstream bad("word,score\nx,9\n");
    CHECK_THROWS_AS(parse_scored_csv(bad), ValidationError);
    std::istringstream no_header("x,3\n");
    CHECK_THROWS_AS(parse_scored_csv(no_header), ParseError);
  }

  TEST_CASE("merge is a union on (pattern, gender)") {
    const auto a = parse("#masculine\nstrong\n#feminine\nwarm\n", DictFormat::categorical_list).dictionary;
    auto b = parse("#masculine\nstrong\nleader\n#feminine\nstrong\n", DictFormat::categorical_list).dictionary;
    b.name = "e";
    b.entries[0].ambiguous = true;
    const Dictionary both[] = {a, b};
    const auto m = merge(both);
    CHECK(m.total() == 4);
    CHECK(m.name == "d + e");
    CHECK(m.entries[0].ambiguous);
    const Dictionary self[] = {a, a};
    CHECK(merge(self).entries == a.entries);
  }

  TEST_CASE("AVA records") {
    std::istringstream in(R"({"term":"love","gender":"f","examples":{"redial":"I love action movies"}}
{"term":"strong","gender":"m","examples":{"massive":"make a strong coffee"},"rationale":"beverage"}
)");
    const auto ava = parse_ava_jsonl(in);
    REQUIRE(ava.size() == 2);
    CHECK(ava[1].rationale == "beverage");
    const auto line = to_jsonl(ava);
    std::istringstream again(line);
    CHECK(to_jsonl(parse_ava_jsonl(again)) == line);

    std::istringstream neutral(R"({"term":"x","gender":"n","examples":{"a":"b"}})");
    CHECK_THROWS_AS(parse_ava_jsonl(neutral), ValidationError);
    std::istringstream empty(R"({"term":"x","gender":"m","examples":{}})");
    CHECK_THROWS_AS(parse_ava_jsonl(empty), ParseError);
  }

  TEST_CASE("AVA subtraction") {
    const auto d = parse("#masculine\nstrong\nstrong*\nleader\n#feminine\nloving\nwarm\n",
                         DictFormat::categorical_list)
                       .dictionary;
    std::vector<AvaEntry> ava{{"love", GenderClass::feminine, {{"c", "x"}}, true, {}},
                              {"strong", GenderClass::masculine, {{"c", "x"}}, true, {}},
                              {"absent", GenderClass::masculine, {{"c", "x"}}, true, {}}};
    const auto removed = subtract(d, ava, AvaMode::remove);
    CHECK(removed.dictionary.total() == 3);  // strong*, leader, warm
    CHECK(removed.unmatched_terms == 1);
    CHECK(removed.dictionary.contains("strong*", GenderClass::masculine));
    CHECK(removed.dictionary.name == "d without AVA");

    const auto flagged = subtract(d, ava, AvaMode::flag);
    CHECK(flagged.dictionary.total() == d.total());
    std::size_t n = 0;
    for (const auto& e : flagged.dictionary.entries) n += e.ambiguous;
    CHECK(n == 2);
  }

  TEST_CASE("AVA validation against sources") {
    const auto d = parse("#masculine\nstrong\n", DictFormat::categorical_list).dictionary;
    std::vector<AvaEntry> ava{{"strong", GenderClass::masculine, {{"c", "x"}}, true, {}},
                              {"warm", GenderClass::feminine, {{"c", "x"}}, true, {}}};
    const Dictionary src[] = {d};
    const auto problems = validate_ava(ava, src);
    REQUIRE(problems.size() == 1);
    CHECK(problems[0].find("warm") != std::string::npos);
  }

  TEST_CASE("shipped AVA file") {
    const auto ava = load_ava(oracle::shipped_data() / "ava" / "ava.jsonl");
    CHECK(ava.size() == 44);
    std::size_t m = 0, f = 0;
    for (const auto& e : ava) (e.original_gender == GenderClass::masculine ? m : f)++;
    CHECK(m == 26);
    CHECK(f == 18);
  }
}
