#include "lexaudit/annotate.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "lexaudit/error.hpp"
#include "lexaudit/glob.hpp"
#include "text.hpp"

namespace lexaudit {

using nlohmann::json;

std::string ConcordanceLine::text() const {
  std::string out = left_context;
  for (const auto* part : {&keyword, &right_context}) {
    if (part->empty()) continue;
    if (!out.empty()) out += ' ';
    out += *part;
  }
  return out;
}

namespace {

std::string join_range(const std::vector<std::string_view>& pieces, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += pieces[i];
  }
  return out;
}

ConcordanceLine make_line(const std::string& corpus, const Utterance& u, std::size_t index, std::size_t window) {
  const auto pieces = detail::split_whitespace(u.text);
  const std::size_t left = index >= window ? index - window : 0;
  const std::size_t right = std::min(pieces.size(), index + 1 + window);
  return {corpus, u.id, join_range(pieces, left, index), std::string(pieces[index]),
          join_range(pieces, index + 1, right)};
}

}  // namespace

std::vector<ConcordanceLine> concordance(const Corpus& c, std::string_view pattern, std::size_t window,
                                         const ConcordanceOptions& options) {
  if (window < 1) throw ValidationError("concordance window must be at least 1", "window");
  const StopWords& sw = options.stopwords ? *options.stopwords : StopWords::snowball_english();
  const std::string normalized = normalize_pattern(pattern, options.category, sw);
  std::vector<ConcordanceLine> out;
  if (normalized.empty()) return out;
  const GlobMatcher matcher(normalized);
  const bool stemmed = options.category == Category::gendered_language;
  for (const auto& u : c.utterances)
    for (const auto& t : tokenize(u, options.profile, sw))
      if (matcher.matches(stemmed ? t.stem : t.norm)) out.push_back(make_line(c.name, u, t.index, window));
  return out;
}

std::int64_t Candidate::total_frequency() const {
  std::int64_t t = 0;
  for (const auto& f : corpora_found) t += f.frequency;
  return t;
}

std::vector<Candidate> extract_candidates(std::span<const MatchSet> matchsets, std::span<const Corpus> corpora,
                                          const CandidateOptions& options) {
  using Key = std::pair<std::string, GenderClass>;
  std::map<Key, Candidate> by_key;
  std::vector<Key> order;

  for (const auto& m : matchsets) {
    const Corpus* corpus = nullptr;
    for (const auto& c : corpora)
      if (c.name == m.corpus_name) corpus = &c;
    std::unordered_map<std::string, const Utterance*> utterances;
    if (corpus)
      for (const auto& u : corpus->utterances) utterances.emplace(u.id, &u);

    // Lines per candidate for this corpus, in corpus order.
    std::map<Key, std::vector<ConcordanceLine>> lines;
    for (const auto& x : m.matches) {
      if (x.category != Category::gendered_language) continue;
      Key key{x.term, x.gender};
      auto [it, inserted] = by_key.try_emplace(key);
      Candidate& cand = it->second;
      if (inserted) {
        cand.term = x.term;
        cand.original_gender = x.gender;
        order.push_back(key);
      }
      const auto& source = m.dictionary.entries.at(x.entry_index).source_id;
      if (std::find(cand.source_dictionaries.begin(), cand.source_dictionaries.end(), source) ==
          cand.source_dictionaries.end())
        cand.source_dictionaries.push_back(source);
      if (cand.corpora_found.empty() || cand.corpora_found.back().corpus != m.corpus_name)
        cand.corpora_found.push_back({m.corpus_name, 0});
      ++cand.corpora_found.back().frequency;

      if (auto u = utterances.find(x.utterance_id); u != utterances.end())
        lines[key].push_back(make_line(m.corpus_name, *u->second, x.token_index, options.window));
      else
        lines[key].push_back({m.corpus_name, x.utterance_id, {}, x.surface, {}});
    }

    // Most frequent contexts first, each context once.
    for (auto& [key, ls] : lines) {
      std::map<std::string, std::size_t> freq;
      for (const auto& l : ls) ++freq[detail::ascii_lower(l.text())];
      std::stable_sort(ls.begin(), ls.end(), [&](const ConcordanceLine& a, const ConcordanceLine& b) {
        return freq[detail::ascii_lower(a.text())] > freq[detail::ascii_lower(b.text())];
      });
      std::set<std::string> seen;
      auto& samples = by_key[key].sample_examples;
      std::size_t taken = 0;
      for (const auto& l : ls) {
        if (taken == options.samples_per_corpus) break;
        if (!seen.insert(detail::ascii_lower(l.text())).second) continue;
        samples.push_back(l);
        ++taken;
      }
    }
  }

  std::vector<Candidate> out;
  out.reserve(order.size());
  for (const auto& k : order) out.push_back(std::move(by_key[k]));
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.total_frequency() != b.total_frequency()) return a.total_frequency() > b.total_frequency();
    return std::tie(a.term, a.original_gender) < std::tie(b.term, b.original_gender);
  });
  return out;
}

json to_json(const ConcordanceLine& l) {
  return json{{"corpus", l.corpus},
              {"utterance_id", l.utterance_id},
              {"left", l.left_context},
              {"keyword", l.keyword},
              {"right", l.right_context}};
}

json to_json(const Candidate& c) {
  json corpora = json::array();
  for (const auto& f : c.corpora_found) corpora.push_back({{"corpus", f.corpus}, {"frequency", f.frequency}});
  json samples = json::array();
  for (const auto& l : c.sample_examples) samples.push_back(to_json(l));
  return json{{"term", c.term},
              {"gender", std::string(gender_code(c.original_gender))},
              {"sources", c.source_dictionaries},
              {"corpora", corpora},
              {"total_frequency", c.total_frequency()},
              {"examples", samples}};
}

Candidate candidate_from_json(const json& j) {
  Candidate c;
  c.term = j.at("term").get<std::string>();
  c.original_gender = parse_gender_code(j.at("gender").get<std::string>());
  if (j.contains("sources")) c.source_dictionaries = j["sources"].get<std::vector<std::string>>();
  if (j.contains("corpora"))
    for (const auto& f : j["corpora"]) c.corpora_found.push_back({f.at("corpus"), f.at("frequency")});
  if (j.contains("examples"))
    for (const auto& l : j["examples"])
      c.sample_examples.push_back({l.at("corpus"), l.at("utterance_id"), l.at("left"), l.at("keyword"), l.at("right")});
  return c;
}

// ---------------------------------------------------------------------------
// Session

std::string_view to_string(TermStatus s) noexcept {
  switch (s) {
    case TermStatus::pending: return "pending";
    case TermStatus::agreed: return "agreed";
    case TermStatus::needs_discussion: return "needs_discussion";
    case TermStatus::resolved: return "resolved";
  }
  return "pending";
}

Session::Session(std::string id, std::vector<Candidate> candidates, std::vector<std::string> raters)
    : id_(std::move(id)), candidates_(std::move(candidates)), raters_(std::move(raters)) {
  if (id_.empty()) throw ValidationError("session id must not be empty", "id");
  if (raters_.empty()) throw ValidationError("a session needs at least one rater", "raters");
  std::set<std::string> seen;
  for (const auto& r : raters_) {
    if (r.empty()) throw ValidationError("rater ids must not be empty", "raters");
    if (!seen.insert(r).second) throw ValidationError("duplicate rater '" + r + "'", "raters");
  }
  seen.clear();
  for (const auto& c : candidates_)
    if (!seen.insert(c.term).second) throw ValidationError("duplicate term '" + c.term + "'", "candidates");
}

bool Session::has_term(const std::string& term) const {
  return std::any_of(candidates_.begin(), candidates_.end(), [&](const Candidate& c) { return c.term == term; });
}

bool Session::has_rater(const std::string& rater) const {
  return std::find(raters_.begin(), raters_.end(), rater) != raters_.end();
}

const Candidate& Session::candidate(const std::string& term) const {
  for (const auto& c : candidates_)
    if (c.term == term) return c;
  throw NotFoundError("unknown term '" + term + "'", "term");
}

std::optional<Rating> Session::rating(const std::string& rater, const std::string& term) const {
  if (auto it = ratings_.find({rater, term}); it != ratings_.end()) return it->second;
  return std::nullopt;
}

void Session::rate(const std::string& rater, const std::string& term, Rating rating) {
  if (!has_rater(rater)) throw ValidationError("unregistered rater '" + rater + "'", "rater");
  if (!has_term(term)) throw NotFoundError("unknown term '" + term + "'", "term");
  if (resolutions_.count(term)) throw ConflictError("term '" + term + "' is already resolved");
  ratings_[{rater, term}] = rating;
  history_.push_back({rater, term, std::move(rating)});
}

void Session::resolve(const std::string& term, Resolution resolution) {
  const auto s = status(term);
  if (s == TermStatus::pending) throw ConflictError("term '" + term + "' has not been rated by every rater");
  if (s == TermStatus::resolved) throw ConflictError("term '" + term + "' is already resolved");
  resolutions_[term] = std::move(resolution);
}

TermStatus Session::status(const std::string& term) const {
  if (!has_term(term)) throw NotFoundError("unknown term '" + term + "'", "term");
  if (resolutions_.count(term)) return TermStatus::resolved;
  std::optional<bool> first;
  bool mismatch = false;
  for (const auto& r : raters_) {
    auto it = ratings_.find({r, term});
    if (it == ratings_.end()) return TermStatus::pending;
    if (!first)
      first = it->second.ambiguous;
    else if (*first != it->second.ambiguous)
      mismatch = true;
  }
  return mismatch ? TermStatus::needs_discussion : TermStatus::agreed;
}

std::optional<bool> Session::decision(const std::string& term) const {
  switch (status(term)) {
    case TermStatus::resolved: return resolutions_.at(term).decision;
    case TermStatus::agreed: return ratings_.at({raters_.front(), term}).ambiguous;
    default: return std::nullopt;
  }
}

std::optional<std::string> Session::next_for(const std::string& rater) const {
  if (!has_rater(rater)) throw ValidationError("unregistered rater '" + rater + "'", "rater");
  for (const auto& c : candidates_)
    if (!ratings_.count({rater, c.term}) && !resolutions_.count(c.term)) return c.term;
  return std::nullopt;
}

RatingsMatrix Session::ratings_matrix() const {
  RatingsMatrix m;
  for (const auto& [key, r] : ratings_) m.set(key.second, key.first, r.ambiguous ? "ambiguous" : "not_ambiguous");
  return m;
}

Session create_session(std::string id, std::vector<Candidate> candidates, std::vector<std::string> raters) {
  return Session(std::move(id), std::move(candidates), std::move(raters));
}

Session submit_rating(Session s, const std::string& rater, const std::string& term, bool ambiguous, std::string note,
                      std::string example_ref) {
  s.rate(rater, term, Rating{ambiguous, std::move(note), std::move(example_ref)});
  return s;
}

Session resolve(Session s, const std::string& term, bool decision, std::string note) {
  s.resolve(term, Resolution{decision, std::move(note)});
  return s;
}

double session_alpha(const Session& s) { return kripp_alpha(s.ratings_matrix()); }

double term_alpha(const Session& s, const std::string& term) {
  if (!s.has_term(term)) throw NotFoundError("unknown term '" + term + "'", "term");
  RatingsMatrix m;
  for (const auto& r : s.raters())
    if (auto rating = s.rating(r, term)) m.set(term, r, rating->ambiguous ? "ambiguous" : "not_ambiguous");
  return kripp_alpha(m);
}

std::vector<AvaEntry> ava_entries(const Session& s) {
  std::vector<AvaEntry> out;
  for (const auto& c : s.candidates()) {
    if (s.decision(c.term) != std::optional<bool>(true)) continue;
    AvaEntry e;
    e.term = c.term;
    e.original_gender = c.original_gender;
    for (const auto& f : c.corpora_found)
      for (const auto& l : c.sample_examples)
        if (l.corpus == f.corpus) {
          e.examples.emplace(f.corpus, l.text());
          break;
        }
    if (e.examples.empty()) throw ValidationError("term '" + c.term + "' has no example snippet", "examples");
    if (auto it = s.resolutions().find(c.term); it != s.resolutions().end() && !it->second.note.empty())
      e.rationale = it->second.note;
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const AvaEntry& a, const AvaEntry& b) { return a.term < b.term; });
  return out;
}

std::string export_ava(const Session& s) { return to_jsonl(ava_entries(s)); }

// ---------------------------------------------------------------------------
// Journal

std::string_view to_string(EventType t) noexcept {
  switch (t) {
    case EventType::created: return "created";
    case EventType::rated: return "rated";
    case EventType::resolved: return "resolved";
  }
  return "created";
}

SessionEvent created_event(const Session& s, std::string timestamp) {
  json candidates = json::array();
  for (const auto& c : s.candidates()) candidates.push_back(to_json(c));
  return {EventType::created, std::move(timestamp),
          json{{"session", s.id()}, {"raters", s.raters()}, {"candidates", candidates}}};
}

SessionEvent rated_event(const std::string& session_id, const RatingEvent& r, std::string timestamp) {
  return {EventType::rated, std::move(timestamp),
          json{{"session", session_id},
               {"rater", r.rater},
               {"term", r.term},
               {"ambiguous", r.rating.ambiguous},
               {"note", r.rating.note},
               {"example_ref", r.rating.example_ref}}};
}

SessionEvent resolved_event(const std::string& session_id, const std::string& term, const Resolution& r,
                            std::string timestamp) {
  return {EventType::resolved, std::move(timestamp),
          json{{"session", session_id}, {"term", term}, {"decision", r.decision}, {"note", r.note}}};
}

std::string to_json_line(const SessionEvent& e) {
  json j{{"type", std::string(to_string(e.type))}, {"timestamp", e.timestamp}, {"payload", e.payload}};
  return j.dump();
}

SessionEvent parse_event(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed journal event: ") + e.what());
  }
  SessionEvent e;
  const auto type = j.value("type", "");
  if (type == "created")
    e.type = EventType::created;
  else if (type == "rated")
    e.type = EventType::rated;
  else if (type == "resolved")
    e.type = EventType::resolved;
  else
    throw ParseError("unknown journal event type '" + type + "'");
  e.timestamp = j.value("timestamp", "");
  e.payload = j.value("payload", json::object());
  return e;
}

void apply(std::map<std::string, Session>& sessions, const SessionEvent& e) {
  const auto& p = e.payload;
  const auto id = p.at("session").get<std::string>();
  switch (e.type) {
    case EventType::created: {
      std::vector<Candidate> candidates;
      for (const auto& c : p.at("candidates")) candidates.push_back(candidate_from_json(c));
      if (sessions.count(id)) throw ConflictError("session '" + id + "' already exists");
      sessions.emplace(id, Session(id, std::move(candidates), p.at("raters").get<std::vector<std::string>>()));
      break;
    }
    case EventType::rated: {
      auto it = sessions.find(id);
      if (it == sessions.end()) throw NotFoundError("unknown session '" + id + "'", "session");
      it->second.rate(p.at("rater"), p.at("term"),
                      Rating{p.at("ambiguous").get<bool>(), p.value("note", ""), p.value("example_ref", "")});
      break;
    }
    case EventType::resolved: {
      auto it = sessions.find(id);
      if (it == sessions.end()) throw NotFoundError("unknown session '" + id + "'", "session");
      it->second.resolve(p.at("term"), Resolution{p.at("decision").get<bool>(), p.value("note", "")});
      break;
    }
  }
}

std::map<std::string, Session> replay(std::span<const SessionEvent> events) {
  std::map<std::string, Session> sessions;
  for (const auto& e : events) apply(sessions, e);
  return sessions;
}

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {}

void Journal::append(const SessionEvent& e) {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("cannot append to journal " + path_.string());
  out << to_json_line(e) << '\n';
  out.flush();
  if (!out) throw IoError("write to journal " + path_.string() + " failed");
}

std::vector<SessionEvent> Journal::read() const {
  std::vector<SessionEvent> events;
  std::ifstream in(path_);
  if (!in) return events;
  std::string line;
  while (std::getline(in, line))
    if (!detail::trim(line).empty()) events.push_back(parse_event(line));
  return events;
}

}  // namespace lexaudit
