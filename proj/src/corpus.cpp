#include "lexaudit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lexaudit/error.hpp"
#include "lexaudit/stemmer.hpp"
#include "text.hpp"

namespace lexaudit {

extern const std::string_view kSnowballEnglishStopList;  // generated at build time

using nlohmann::json;

std::string_view to_string(Partition p) noexcept {
  switch (p) {
    case Partition::train: return "train";
    case Partition::dev: return "dev";
    case Partition::test: return "test";
    case Partition::unpartitioned: return "unpartitioned";
  }
  return "unpartitioned";
}

Partition parse_partition(std::string_view s) {
  if (s == "train") return Partition::train;
  if (s == "dev") return Partition::dev;
  if (s == "test") return Partition::test;
  if (s == "unpartitioned") return Partition::unpartitioned;
  throw ValidationError("unknown partition '" + std::string(s) + "'", "partition");
}

std::string_view to_string(SourceFormat f) noexcept {
  return f == SourceFormat::massive_jsonl ? "massive_jsonl" : "redial_json";
}

SourceFormat parse_source_format(std::string_view s) {
  if (s == "massive" || s == "massive_jsonl") return SourceFormat::massive_jsonl;
  if (s == "redial" || s == "redial_json") return SourceFormat::redial_json;
  throw ValidationError("unknown corpus format '" + std::string(s) + "'", "format");
}

std::vector<Partition> Corpus::partitions() const {
  std::set<Partition> seen;
  for (const auto& u : utterances) seen.insert(u.partition);
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------
// Profiles

PipelineProfile PipelineProfile::gendered_language() {
  return {"gendered_language", true, true, true, true, true};
}
PipelineProfile PipelineProfile::pronouns() {
  return {"pronouns", true, true, false, false, true};
}
PipelineProfile PipelineProfile::marked_words() {
  return {"marked_words", true, true, true, false, true};
}
PipelineProfile PipelineProfile::names() {
  return {"names", true, true, true, false, true};
}

PipelineProfile profile_by_name(std::string_view name) {
  if (name == "gendered_language") return PipelineProfile::gendered_language();
  if (name == "pronouns") return PipelineProfile::pronouns();
  if (name == "marked_words") return PipelineProfile::marked_words();
  if (name == "names") return PipelineProfile::names();
  throw ValidationError("unknown profile '" + std::string(name) + "'", "profile");
}

// ---------------------------------------------------------------------------
// Stop words

StopWords StopWords::parse(std::istream& in) {
  StopWords sw;
  std::string line;
  while (std::getline(in, line)) {
    auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      constexpr std::string_view tag = "#version";
      if (t.substr(0, tag.size()) == tag) sw.version_ = std::string(detail::trim(t.substr(tag.size())));
      continue;
    }
    sw.words_.insert(detail::ascii_lower(t));
  }
  return sw;
}

StopWords StopWords::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stop-word list " + path.string());
  return parse(in);
}

const StopWords& StopWords::snowball_english() {
  static const StopWords list = [] {
    std::istringstream in{std::string(kSnowballEnglishStopList)};
    return parse(in);
  }();
  return list;
}

bool StopWords::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

std::vector<std::string> StopWords::words() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Parsers

namespace {

std::string scalar_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return {};
}

json parse_line(const std::string& line, std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
  }
}

void check_unique(std::set<std::string>& ids, const std::string& id, std::size_t lineno) {
  if (id.empty()) throw ParseError("empty utterance id", lineno);
  if (!ids.insert(id).second)
    throw ValidationError("duplicate utterance id '" + id + "'", "id");
}

}  // namespace

Corpus parse_massive(std::istream& in, std::string name) {
  Corpus c{std::move(name), SourceFormat::massive_jsonl, {}};
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const json obj = parse_line(line, lineno);
    if (!obj.is_object()) throw ParseError("expected a JSON object", lineno);
    for (const char* field : {"id", "partition", "utt"})
      if (!obj.contains(field)) throw ParseError(std::string("missing field '") + field + "'", lineno);
    if (!obj["utt"].is_string()) throw ParseError("field 'utt' must be a string", lineno);
    if (!obj["partition"].is_string()) throw ParseError("field 'partition' must be a string", lineno);

    Utterance u;
    u.id = scalar_string(obj["id"]);
    check_unique(ids, u.id, lineno);
    u.partition = parse_partition(obj["partition"].get<std::string>());
    u.text = obj["utt"].get<std::string>();
    for (const char* key : {"locale", "scenario", "intent", "worker_id"})
      if (auto it = obj.find(key); it != obj.end() && !it->is_null()) u.meta[key] = scalar_string(*it);
    c.utterances.push_back(std::move(u));
  }
  return c;
}

Corpus parse_redial(std::istream& in, Partition partition_label, std::string name) {
  Corpus c{std::move(name), SourceFormat::redial_json, {}};
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const json dialogue = parse_line(line, lineno);
    if (!dialogue.is_object()) throw ParseError("expected a dialogue object", lineno);
    auto messages = dialogue.find("messages");
    if (messages == dialogue.end() || !messages->is_array())
      throw ParseError("dialogue without a 'messages' array", lineno);
    std::string dialogue_id;
    if (auto it = dialogue.find("conversationId"); it != dialogue.end()) dialogue_id = scalar_string(*it);

    for (const auto& m : *messages) {
      if (!m.is_object()) throw ParseError("message is not an object", lineno);
      auto mid = m.find("messageId");
      if (mid == m.end() || mid->is_null()) throw ParseError("message without messageId", lineno);
      auto text = m.find("text");
      if (text == m.end() || !text->is_string()) throw ParseError("message without text", lineno);

      Utterance u;
      u.id = scalar_string(*mid);
      check_unique(ids, u.id, lineno);
      u.partition = partition_label;
      u.text = text->get<std::string>();
      if (!dialogue_id.empty()) u.meta["dialogue_id"] = dialogue_id;
      u.meta["message_id"] = u.id;
      if (auto it = m.find("senderWorkerId"); it != m.end()) u.meta["sender_worker_id"] = scalar_string(*it);
      if (auto it = m.find("timeOffset"); it != m.end()) u.meta["time_offset"] = scalar_string(*it);
      c.utterances.push_back(std::move(u));
    }
  }
  return c;
}

Corpus load_corpus(const std::filesystem::path& path, SourceFormat format,
                   Partition redial_partition, std::string name) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus " + path.string());
  if (name.empty()) name = path.stem().string();
  return format == SourceFormat::massive_jsonl ? parse_massive(in, std::move(name))
                                               : parse_redial(in, redial_partition, std::move(name));
}

// ---------------------------------------------------------------------------
// Tokenization

bool is_placeholder(std::string_view s) noexcept {
  if (s.size() < 2 || s.front() != '@') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

namespace {

bool is_edge_punct(char c) { return kEdgePunctuation.find(c) != std::string_view::npos; }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::string normalize_surface(std::string_view surface, const PipelineProfile& profile) {
  std::string_view core = surface;
  if (profile.strip_punctuation) {
    std::size_t b = 0, e = surface.size();
    while (b < e && is_edge_punct(surface[b])) ++b;
    while (e > b && is_edge_punct(surface[e - 1])) --e;
    // A digit run right after "@" is a placeholder and keeps its "@": "(@123)," -> "@123".
    if (b > 0 && surface[b - 1] == '@' && all_digits(surface.substr(b, e - b))) --b;
    core = surface.substr(b, e - b);
  }
  return profile.lowercase ? detail::ascii_lower(core) : std::string(core);
}

std::vector<Token> tokenize(const Utterance& u, const PipelineProfile& p, const StopWords& stopwords) {
  std::vector<Token> out;
  const auto pieces = detail::split_whitespace(u.text);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    Token t;
    t.surface = std::string(pieces[i]);
    t.norm = normalize_surface(pieces[i], p);
    if (t.norm.empty()) continue;
    t.flags.is_placeholder = is_placeholder(t.norm);
    if (t.flags.is_placeholder && p.drop_placeholders) continue;
    t.flags.is_stopword = stopwords.contains(t.norm);
    if (t.flags.is_stopword && p.remove_stopwords) continue;
    t.stem = (p.stem && !t.flags.is_placeholder) ? stem(t.norm) : t.norm;
    t.utterance_id = u.id;
    t.index = i;
    out.push_back(std::move(t));
  }
  return out;
}

CorpusStats corpus_stats(const Corpus& c, const PipelineProfile& p, const StopWords& stopwords) {
  CorpusStats s;
  std::unordered_set<std::string> norms, stems;
  PipelineProfile counting = p;
  counting.remove_stopwords = false;
  for (const auto& u : c.utterances) {
    for (const auto& t : tokenize(u, counting, stopwords)) {
      ++s.total_tokens;
      ++s.per_partition_counts[u.partition];
      norms.insert(t.norm);
      if (!(p.remove_stopwords && t.flags.is_stopword)) stems.insert(t.stem);
    }
  }
  s.unique_surface = norms.size();
  s.unique_processed = stems.size();
  return s;
}

}  // namespace lexaudit
