#include "lexaudit/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "lexaudit/error.hpp"
#include "lexaudit/glob.hpp"
#include "lexaudit/stemmer.hpp"
#include "text.hpp"

namespace lexaudit {

using nlohmann::json;

std::string_view to_string(GenderClass g) noexcept {
  switch (g) {
    case GenderClass::masculine: return "masculine";
    case GenderClass::feminine: return "feminine";
    case GenderClass::neutral: return "neutral";
    case GenderClass::neo: return "neo";
    case GenderClass::other: return "other";
  }
  return "other";
}

std::string_view gender_code(GenderClass g) noexcept {
  switch (g) {
    case GenderClass::masculine: return "m";
    case GenderClass::feminine: return "f";
    case GenderClass::neutral: return "n";
    case GenderClass::neo: return "neo";
    case GenderClass::other: return "o";
  }
  return "o";
}

GenderClass parse_gender_code(std::string_view code) {
  if (code == "m") return GenderClass::masculine;
  if (code == "f") return GenderClass::feminine;
  if (code == "n") return GenderClass::neutral;
  if (code == "o") return GenderClass::other;
  if (code == "neo") return GenderClass::neo;
  throw ValidationError("unknown gender code '" + std::string(code) + "'", "gender");
}

GenderClass parse_gender(std::string_view s) {
  for (GenderClass g : kAllGenders)
    if (s == to_string(g)) return g;
  return parse_gender_code(s);
}

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::gendered_language: return "gendered_language";
    case Category::pronoun: return "pronoun";
    case Category::marked_word: return "marked_word";
    case Category::name: return "name";
  }
  return "gendered_language";
}

Category parse_category(std::string_view s) {
  for (Category c : {Category::gendered_language, Category::pronoun, Category::marked_word, Category::name})
    if (s == to_string(c)) return c;
  throw ValidationError("unknown category '" + std::string(s) + "'", "category");
}

std::string_view to_string(DictFormat f) noexcept {
  switch (f) {
    case DictFormat::categorical_list: return "categorical_list";
    case DictFormat::scored_csv: return "scored_csv";
    case DictFormat::gender_tag_json: return "gender_tag_json";
    case DictFormat::ava_jsonl: return "ava_jsonl";
    case DictFormat::pronoun_lists: return "pronoun_lists";
    case DictFormat::name_lists: return "name_lists";
  }
  return "categorical_list";
}

DictFormat parse_dict_format(std::string_view s) {
  for (DictFormat f : {DictFormat::categorical_list, DictFormat::scored_csv, DictFormat::gender_tag_json,
                       DictFormat::ava_jsonl, DictFormat::pronoun_lists, DictFormat::name_lists})
    if (s == to_string(f)) return f;
  throw ValidationError("unknown dictionary format '" + std::string(s) + "'", "dict-format");
}

std::string_view to_string(AvaMode m) noexcept { return m == AvaMode::remove ? "remove" : "flag"; }

AvaMode parse_ava_mode(std::string_view s) {
  if (s == "remove") return AvaMode::remove;
  if (s == "flag") return AvaMode::flag;
  throw ValidationError("unknown AVA mode '" + std::string(s) + "'", "ava-mode");
}

bool Dictionary::contains(std::string_view pattern, GenderClass g) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const DictEntry& e) { return e.pattern == pattern && e.gender == g; });
}

std::vector<Category> Dictionary::categories() const {
  std::set<Category> seen;
  for (const auto& e : entries) seen.insert(e.category);
  return {seen.begin(), seen.end()};
}

std::string normalize_pattern(std::string_view term, Category category, const StopWords& stopwords) {
  std::string p = detail::ascii_lower(detail::trim(term));
  if (category != Category::gendered_language || has_wildcard(p)) return p;
  if (stopwords.contains(p)) return {};
  return stem(p);
}

// ---------------------------------------------------------------------------
// Loading

namespace {

using Key = std::pair<std::string, GenderClass>;

// Accumulates entries while enforcing (pattern, gender) uniqueness.
class EntrySink {
 public:
  EntrySink(LoadResult& result, const StopWords& stopwords) : result_(result), stopwords_(stopwords) {}

  void add(std::string_view raw_term, GenderClass g, Category c, const std::string& source,
           std::optional<double> score = std::nullopt, bool normalize = true) {
    const auto term = detail::trim(raw_term);
    if (term.empty()) return;
    if (detail::contains_space(term)) {
      ++result_.rejected;
      return;
    }
    std::string pattern = normalize ? normalize_pattern(term, c, stopwords_) : detail::ascii_lower(term);
    if (pattern.empty()) {
      ++result_.rejected;
      return;
    }
    if (!seen_.insert({pattern, g}).second) {
      ++result_.duplicates;
      return;
    }
    result_.dictionary.entries.push_back(DictEntry{std::move(pattern), std::string(term), g, c, source, score, false});
  }

 private:
  LoadResult& result_;
  const StopWords& stopwords_;
  std::set<Key> seen_;
};

void parse_categorical(std::istream& in, Category category, const std::string& source, EntrySink& sink) {
  std::optional<GenderClass> section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty() || t.substr(0, 2) == "##") continue;
    if (t.front() == '#') {
      auto name = detail::trim(t.substr(1));
      try {
        section = parse_gender(name);
      } catch (const ValidationError&) {
        throw ParseError("unknown gender section '" + std::string(name) + "'", lineno);
      }
      continue;
    }
    if (!section) throw ParseError("term outside of a gender section", lineno);
    sink.add(t, *section, category, source);
  }
}

void parse_gender_tags(std::istream& in, Category category, const std::string& source, EntrySink& sink) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
    if (!obj.is_object() || !obj.contains("word") || !obj.contains("gender") || !obj["word"].is_string() ||
        !obj["gender"].is_string())
      throw ParseError("expected {\"word\": string, \"gender\": string}", lineno);
    const auto code = obj["gender"].get<std::string>();
    if (code != "m" && code != "f" && code != "n" && code != "o")
      throw ValidationError("unknown gender code '" + code + "'", "gender");
    sink.add(obj["word"].get<std::string>(), parse_gender_code(code), category, source);
  }
}

}  // namespace

std::vector<ScoredWord> parse_scored_csv(std::istream& in) {
  std::vector<ScoredWord> out;
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::trim(line);
    if (t.empty()) continue;
    if (header) {
      header = false;
      if (detail::ascii_lower(t) != "word,score") throw ParseError("expected header 'word,score'", lineno);
      continue;
    }
    const auto comma = t.rfind(',');
    if (comma == std::string_view::npos) throw ParseError("expected 'word,score'", lineno);
    auto word = detail::trim(t.substr(0, comma));
    auto num = detail::trim(t.substr(comma + 1));
    if (word.size() >= 2 && word.front() == '"' && word.back() == '"') word = word.substr(1, word.size() - 2);
    double score = 0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), score);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw ParseError("invalid score '" + std::string(num) + "'", lineno);
    if (score < 1.0 || score > 7.0)
      throw ValidationError("score " + std::string(num) + " for '" + std::string(word) + "' outside [1,7]", "score");
    out.push_back({std::string(word), score});
  }
  return out;
}

LoadResult parse_dictionary(std::istream& in, DictFormat format, LoadOptions options) {
  LoadResult result;
  const StopWords& sw = options.stopwords ? *options.stopwords : StopWords::snowball_english();
  if (options.name.empty()) options.name = std::string(to_string(format));
  if (options.source_id.empty()) options.source_id = options.name;

  result.dictionary.name = options.name;
  result.dictionary.metadata = options.metadata;
  if (result.dictionary.metadata.sources.empty()) result.dictionary.metadata.sources.push_back(options.source_id);

  EntrySink sink(result, sw);
  const auto& src = options.source_id;
  switch (format) {
    case DictFormat::categorical_list:
      parse_categorical(in, options.category.value_or(Category::gendered_language), src, sink);
      break;
    case DictFormat::pronoun_lists:
      parse_categorical(in, options.category.value_or(Category::pronoun), src, sink);
      break;
    case DictFormat::name_lists:
      parse_categorical(in, options.category.value_or(Category::name), src, sink);
      break;
    case DictFormat::gender_tag_json:
      parse_gender_tags(in, options.category.value_or(Category::marked_word), src, sink);
      break;
    case DictFormat::scored_csv:
      for (auto& w : parse_scored_csv(in))
        sink.add(w.word, GenderClass::neutral, options.category.value_or(Category::gendered_language), src, w.score,
                 /*normalize=*/false);
      break;
    case DictFormat::ava_jsonl:
      for (const auto& e : parse_ava_jsonl(in))
        sink.add(e.term, e.original_gender, options.category.value_or(Category::gendered_language), src);
      break;
  }
  return result;
}

LoadResult load_dictionary(const std::filesystem::path& path, DictFormat format, LoadOptions options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dictionary " + path.string());
  if (options.name.empty()) options.name = path.stem().string();
  return parse_dictionary(in, format, std::move(options));
}

// ---------------------------------------------------------------------------
// Thresholds

ThresholdPolicy ThresholdPolicy::loose() { return {"loose", 3.0, true, 5.0, true}; }
ThresholdPolicy ThresholdPolicy::conservative() { return {"conservative", 2.5, false, 5.5, false}; }

std::optional<GenderClass> ThresholdPolicy::classify(double score) const {
  if (masc_inclusive ? score >= masc_bound : score > masc_bound) return GenderClass::masculine;
  if (fem_inclusive ? score <= fem_bound : score < fem_bound) return GenderClass::feminine;
  return std::nullopt;
}

ThresholdPolicy threshold_by_name(std::string_view name) {
  if (name == "loose") return ThresholdPolicy::loose();
  if (name == "conservative") return ThresholdPolicy::conservative();
  throw ValidationError("unknown threshold policy '" + std::string(name) + "'", "threshold");
}

Dictionary apply_threshold(std::span<const ScoredWord> scored, const ThresholdPolicy& policy,
                           std::string source_id, const StopWords& stopwords) {
  LoadResult result;
  result.dictionary.name = source_id + " (" + policy.name + ")";
  result.dictionary.metadata.sources.push_back(source_id);
  EntrySink sink(result, stopwords);
  for (const auto& w : scored) {
    if (!(w.score >= 1.0 && w.score <= 7.0))
      throw ValidationError("score for '" + w.word + "' outside [1,7]", "score");
    if (auto g = policy.classify(w.score))
      sink.add(w.word, *g, Category::gendered_language, source_id, w.score);
  }
  return std::move(result.dictionary);
}

Dictionary apply_threshold(const Dictionary& scored, const ThresholdPolicy& policy, const StopWords& stopwords) {
  std::vector<ScoredWord> words;
  for (const auto& e : scored.entries) {
    if (!e.score) throw ValidationError("entry '" + e.term + "' has no score", "score");
    words.push_back({e.term, *e.score});
  }
  const std::string source = scored.metadata.sources.empty() ? scored.name : scored.metadata.sources.front();
  Dictionary d = apply_threshold(words, policy, source, stopwords);
  d.name = scored.name + " (" + policy.name + ")";
  d.metadata = scored.metadata;
  if (d.metadata.sources.empty()) d.metadata.sources.push_back(source);
  return d;
}

// ---------------------------------------------------------------------------
// Merge / subtract

Dictionary merge(std::span<const Dictionary> dicts) {
  Dictionary out;
  std::map<Key, std::size_t> index;
  for (const auto& d : dicts) {
    if (!out.name.empty()) out.name += " + ";
    out.name += d.name;
    for (const auto& s : d.metadata.sources)
      if (std::find(out.metadata.sources.begin(), out.metadata.sources.end(), s) == out.metadata.sources.end())
        out.metadata.sources.push_back(s);
    for (const auto& e : d.entries) {
      auto [it, inserted] = index.try_emplace(Key{e.pattern, e.gender}, out.entries.size());
      if (inserted)
        out.entries.push_back(e);
      else if (e.ambiguous)
        out.entries[it->second].ambiguous = true;
    }
  }
  return out;
}

SubtractResult subtract(const Dictionary& d, std::span<const AvaEntry> terms, AvaMode mode,
                        const StopWords& stopwords) {
  SubtractResult result{d, 0};
  auto& entries = result.dictionary.entries;

  auto hits = [&](const DictEntry& e, const AvaEntry& a) {
    return e.pattern == normalize_pattern(a.term, e.category, stopwords);
  };
  for (const auto& a : terms)
    if (std::none_of(d.entries.begin(), d.entries.end(), [&](const DictEntry& e) { return hits(e, a); }))
      ++result.unmatched_terms;

  auto is_ava = [&](const DictEntry& e) {
    return std::any_of(terms.begin(), terms.end(), [&](const AvaEntry& a) { return hits(e, a); });
  };
  if (mode == AvaMode::remove) {
    std::erase_if(entries, is_ava);
    result.dictionary.name += " without AVA";
  } else {
    for (auto& e : entries)
      if (is_ava(e)) e.ambiguous = true;
    result.dictionary.name += " (AVA flagged)";
  }
  return result;
}

// ---------------------------------------------------------------------------
// AVA records

std::vector<AvaEntry> parse_ava_jsonl(std::istream& in) {
  std::vector<AvaEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    }
    if (!obj.is_object() || !obj.contains("term") || !obj["term"].is_string())
      throw ParseError("AVA record without a string 'term'", lineno);
    if (!obj.contains("gender") || !obj["gender"].is_string())
      throw ParseError("AVA record without a string 'gender'", lineno);

    AvaEntry e;
    e.term = obj["term"].get<std::string>();
    const auto code = obj["gender"].get<std::string>();
    if (code != "m" && code != "f")
      throw ValidationError("AVA gender must be 'm' or 'f', got '" + code + "'", "gender");
    e.original_gender = parse_gender_code(code);
    auto ex = obj.find("examples");
    if (ex == obj.end() || !ex->is_object() || ex->empty())
      throw ParseError("AVA record '" + e.term + "' without examples", lineno);
    for (auto it = ex->begin(); it != ex->end(); ++it) {
      if (!it.value().is_string()) throw ParseError("AVA example snippets must be strings", lineno);
      e.examples[it.key()] = it.value().get<std::string>();
    }
    if (auto r = obj.find("rationale"); r != obj.end() && r->is_string()) e.rationale = r->get<std::string>();
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<AvaEntry> load_ava(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open AVA file " + path.string());
  return parse_ava_jsonl(in);
}

std::string to_json_line(const AvaEntry& e) {
  json obj;
  obj["term"] = e.term;
  obj["gender"] = std::string(gender_code(e.original_gender));
  obj["examples"] = json::object();
  for (const auto& [corpus, snippet] : e.examples) obj["examples"][corpus] = snippet;
  if (e.rationale) obj["rationale"] = *e.rationale;
  return obj.dump();
}

std::string to_jsonl(std::span<const AvaEntry> entries) {
  std::string out;
  for (const auto& e : entries) {
    out += to_json_line(e);
    out += '\n';
  }
  return out;
}

std::vector<std::string> validate_ava(std::span<const AvaEntry> entries, std::span<const Dictionary> sources,
                                      const StopWords& stopwords) {
  std::vector<std::string> problems;
  for (const auto& a : entries) {
    if (a.original_gender != GenderClass::masculine && a.original_gender != GenderClass::feminine)
      problems.push_back("'" + a.term + "': original gender must be masculine or feminine");
    if (a.examples.empty()) problems.push_back("'" + a.term + "': no example snippets");
    const auto pattern = normalize_pattern(a.term, Category::gendered_language, stopwords);
    bool found = false;
    for (const auto& d : sources)
      for (const auto& e : d.entries)
        if (e.category == Category::gendered_language &&
            (e.pattern == pattern || compile_glob(e.pattern).matches(pattern)))
          found = true;
    if (!found) problems.push_back("'" + a.term + "': not in any gendered-language source dictionary");
  }
  return problems;
}

}  // namespace lexaudit
