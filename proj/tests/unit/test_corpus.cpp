#include <doctest.h>

#include <sstream>

#include "lexaudit/corpus.hpp"
#include "lexaudit/error.hpp"
#include "oracles.hpp"

using namespace lexaudit;

namespace {

Utterance utt(std::string text) { return Utterance{"u1", Partition::train, std::move(text), {}}; }

std::vector<std::string> norms(const std::vector<Token>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(t.norm);
  return out;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("partition names") {
    CHECK(parse_partition("dev") == Partition::dev);
    CHECK(to_string(Partition::unpartitioned) == "unpartitioned");
    try {
      parse_partition("validation");
      FAIL("expected a throw");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("validation") != std::string::npos);
    }
  }

  TEST_CASE("stop list") {
    const auto& sw = StopWords::snowball_english();
    CHECK(sw.size() == 175);
    CHECK(sw.version() == "1.0.0");
    CHECK(sw.contains("she"));
    CHECK(sw.contains("will"));
    CHECK_FALSE(sw.contains("love"));

    std::istringstream in("#version 2.0.0\n# comment\nfoo\n\nbar\n");
    const auto custom = StopWords::parse(in);
    CHECK(custom.size() == 2);
    CHECK(custom.version() == "2.0.0");
  }

  TEST_CASE("edge punctuation and placeholders") {
    const auto p = PipelineProfile::gendered_language();
    CHECK(normalize_surface("(Hello)!", p) == "hello");
    CHECK(normalize_surface("don't", p) == "don't");
    CHECK(normalize_surface("...", p) == "");
    CHECK(normalize_surface("@111776", p) == "@111776");
    CHECK(normalize_surface("(@111776),", p) == "@111776");
    CHECK(normalize_surface("@love", p) == "love");
    CHECK(is_placeholder("@12"));
    CHECK_FALSE(is_placeholder("@"));
    CHECK_FALSE(is_placeholder("@1a"));
  }

  TEST_CASE("profiles") {
    const auto gl = PipelineProfile::gendered_language();
    CHECK(gl.remove_stopwords);
    CHECK(gl.stem);
    CHECK_FALSE(PipelineProfile::pronouns().remove_stopwords);
    CHECK_FALSE(PipelineProfile::pronouns().stem);
    CHECK(PipelineProfile::marked_words().remove_stopwords);
    CHECK_FALSE(PipelineProfile::names().stem);
    CHECK(profile_by_name("names") == PipelineProfile::names());
    CHECK_THROWS_AS(profile_by_name("nouns"), ValidationError);
  }

  TEST_CASE("tokenize keeps original indices") {
    const auto ts = tokenize(utt("She said: I LOVE @123 movies!"), PipelineProfile::gendered_language());
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].norm == "said");
    CHECK(ts[0].index == 1);
    CHECK(ts[1].norm == "love");
    CHECK(ts[1].index == 3);
    CHECK(ts[2].norm == "movies");
    CHECK(ts[2].stem == "movi");
    CHECK(ts[2].index == 5);
    CHECK(ts[2].utterance_id == "u1");
  }

  TEST_CASE("pronoun profile keeps stop words unstemmed") {
    const auto ts = tokenize(utt("She gave him hers."), PipelineProfile::pronouns());
    CHECK(norms(ts) == std::vector<std::string>{"she", "gave", "him", "hers"});
    CHECK(ts[0].flags.is_stopword);
    CHECK(ts[1].stem == "gave");
  }

  TEST_CASE("matches the rule-by-rule oracle") {
    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
      const auto inst = oracle::random_instance(rng);
      for (const auto& u : inst.corpus.utterances) {
        const auto got = tokenize(u, inst.profile);
        const auto want = oracle::naive_tokens(u.text, inst.profile, StopWords::snowball_english());
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); ++k) {
          CHECK(got[k].index == want[k].index);
          CHECK(got[k].norm == want[k].norm);
          CHECK(got[k].stem == want[k].stem);
        }
      }
    }
  }

  TEST_CASE("MASSIVE parsing") {
    std::istringstream in(R"({"id":"1","locale":"en-US","partition":"train","scenario":"music","intent":"play_music","utt":"play jazz"}
{"id":"2","partition":"test","utt":"stop"}
)");
    const auto c = parse_massive(in);
    REQUIRE(c.utterances.size() == 2);
    CHECK(c.name == "massive");
    CHECK(c.utterances[0].meta.at("scenario") == "music");
    CHECK(c.partitions() == std::vector<Partition>{Partition::train, Partition::test});
  }

  TEST_CASE("MASSIVE errors carry line numbers") {
    std::istringstream bad_json("{\"id\":\"1\",\"partition\":\"train\",\"utt\":\"a\"}\n{oops\n");
    try {
      parse_massive(bad_json);
      FAIL("expected a throw");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::istringstream missing("{\"id\":\"1\",\"utt\":\"a\"}\n");
    CHECK_THROWS_AS(parse_massive(missing), ParseError);
    std::istringstream dup("{\"id\":\"1\",\"partition\":\"train\",\"utt\":\"a\"}\n{\"id\":\"1\",\"partition\":\"dev\",\"utt\":\"b\"}\n");
    CHECK_THROWS_AS(parse_massive(dup), ValidationError);
    std::istringstream part("{\"id\":\"1\",\"partition\":\"valid\",\"utt\":\"a\"}\n");
    CHECK_THROWS_AS(parse_massive(part), ValidationError);
  }

  TEST_CASE("ReDial parsing") {
    const auto c = load_corpus(oracle::test_data() / "fixtures" / "redial_mini.jsonl", SourceFormat::redial_json,
                               Partition::test, "redial");
    REQUIRE(c.utterances.size() == 6);
    CHECK(c.utterances[0].id == "101");
    CHECK(c.utterances[0].partition == Partition::test);
    CHECK(c.utterances[0].meta.at("dialogue_id") == "c1");
    CHECK(c.utterances[0].meta.at("sender_worker_id") == "1");
    std::istringstream no_id(R"({"conversationId":1,"messages":[{"text":"hi"}]})");
    CHECK_THROWS_AS(parse_redial(no_id, Partition::train), ParseError);
    CHECK_THROWS_AS(load_corpus("/nonexistent/file.jsonl", SourceFormat::massive_jsonl), IoError);
  }

  TEST_CASE("placeholders are dropped before counting") {
    const auto c = load_corpus(oracle::test_data() / "fixtures" / "redial_mini.jsonl", SourceFormat::redial_json);
    for (const auto& u : c.utterances)
      for (const auto& t : tokenize(u, PipelineProfile::gendered_language())) CHECK(t.norm[0] != '@');
  }

  TEST_CASE("corpus stats") {
    Corpus c{"c", SourceFormat::massive_jsonl, {}};
    c.utterances.push_back({"1", Partition::train, "She loves loving love.", {}});
    c.utterances.push_back({"2", Partition::dev, "the LOVE, she said", {}});
    const auto s = corpus_stats(c, PipelineProfile::gendered_language());
    CHECK(s.total_tokens == 8);
    CHECK(s.per_partition_counts.at(Partition::train) == 4);
    CHECK(s.per_partition_counts.at(Partition::dev) == 4);
    // she, loves, loving, love, the, said
    CHECK(s.unique_surface == 6);
    // love, said
    CHECK(s.unique_processed == 2);
  }
}
