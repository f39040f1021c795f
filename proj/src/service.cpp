#include "lexaudit/service.hpp"

#include <charconv>
#include <ctime>

#include <httplib.h>

#include "lexaudit/error.hpp"

namespace lexaudit {

using nlohmann::json;

std::vector<Candidate> candidates_for(const Workspace& w, const CandidateOptions& options) {
  std::vector<Dictionary> gendered;
  for (const auto& d : w.dictionaries) {
    Dictionary g{d.name, {}, d.metadata};
    for (const auto& e : d.entries)
      if (e.category == Category::gendered_language) g.entries.push_back(e);
    if (!g.entries.empty()) gendered.push_back(std::move(g));
  }
  if (gendered.empty()) return {};
  const Dictionary combined = merge(gendered);

  AuditOptions audit;
  audit.exclusions = w.exclusions;
  std::vector<MatchSet> sets;
  for (const auto& c : w.corpora)
    sets.push_back(run_audit(c, combined, PipelineProfile::gendered_language(), audit));
  return extract_candidates(sets, w.corpora, options);
}

namespace {

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json error_body(const std::string& message, const std::string& field) {
  return json{{"error", message}, {"field", field.empty() ? json(nullptr) : json(field)}};
}

// Maps domain errors onto status codes.
template <typename F>
ApiResponse guarded(F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    return {400, error_body(e.what(), e.field())};
  } catch (const ParseError& e) {
    return {400, error_body(e.what(), "body")};
  } catch (const ConfigError& e) {
    return {400, error_body(e.what(), "")};
  } catch (const NotFoundError& e) {
    return {404, error_body(e.what(), e.field())};
  } catch (const ConflictError& e) {
    return {409, error_body(e.what(), "")};
  } catch (const Error& e) {
    return {500, error_body(e.what(), "")};
  }
}

json parse_body(const std::string& body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw ValidationError("request body must be a JSON object", "body");
    return j;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("request body is not valid JSON: ") + e.what(), "body");
  }
}

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing '") + key + "'", key);
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("'") + key + "' has the wrong type", key);
  }
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("'") + key + "' has the wrong type", key);
  }
}

json nullable(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

std::optional<double> try_alpha(auto&& f) {
  try {
    return f();
  } catch (const ValidationError&) {
    return std::nullopt;  // nothing pairable yet
  }
}

}  // namespace

json session_json(const Session& s) {
  json terms = json::array();
  std::map<std::string, int> counts{{"pending", 0}, {"agreed", 0}, {"needs_discussion", 0}, {"resolved", 0}};
  for (const auto& c : s.candidates()) {
    const auto status = s.status(c.term);
    ++counts[std::string(to_string(status))];
    json ratings = json::object();
    for (const auto& r : s.raters())
      if (auto rating = s.rating(r, c.term))
        ratings[r] = {{"ambiguous", rating->ambiguous}, {"note", rating->note}, {"example_ref", rating->example_ref}};
    const auto decision = s.decision(c.term);
    json t{{"term", c.term},
           {"gender", std::string(gender_code(c.original_gender))},
           {"total_frequency", c.total_frequency()},
           {"status", std::string(to_string(status))},
           {"decision", decision ? json(*decision) : json(nullptr)},
           {"ratings", ratings}};
    if (auto it = s.resolutions().find(c.term); it != s.resolutions().end()) t["resolution_note"] = it->second.note;
    terms.push_back(std::move(t));
  }
  return json{{"id", s.id()}, {"raters", s.raters()}, {"terms", terms}, {"counts", counts}};
}

AnnotationService::AnnotationService(std::vector<Corpus> corpora, std::vector<Candidate> candidates,
                                     std::optional<std::filesystem::path> journal)
    : corpora_(std::move(corpora)), candidates_(std::move(candidates)) {
  if (!journal) return;
  journal_.emplace(*journal);
  const auto events = journal_->read();
  for (auto& [id, s] : replay(events)) {
    auto slot = std::make_shared<Slot>();
    slot->session = std::move(s);
    sessions_.emplace(id, std::move(slot));
  }
  next_id_ = sessions_.size() + 1;
}

std::shared_ptr<AnnotationService::Slot> AnnotationService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'", "session");
  return it->second;
}

void AnnotationService::record(const SessionEvent& e) {
  if (!journal_) return;
  std::lock_guard lock(journal_mutex_);
  journal_->append(e);
}

std::optional<Session> AnnotationService::snapshot(const std::string& id) const {
  try {
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    return slot->session;
  } catch (const NotFoundError&) {
    return std::nullopt;
  }
}

ApiResponse AnnotationService::candidates() const {
  json out = json::array();
  for (const auto& c : candidates_) out.push_back(to_json(c));
  return {200, json{{"candidates", out}}};
}

ApiResponse AnnotationService::concordance(const std::string& term, const std::string& corpus,
                                           const std::string& window) const {
  return guarded([&]() -> ApiResponse {
    if (term.empty()) throw ValidationError("missing 'term'", "term");
    std::size_t w = 5;
    if (!window.empty()) {
      auto [ptr, ec] = std::from_chars(window.data(), window.data() + window.size(), w);
      if (ec != std::errc{} || ptr != window.data() + window.size())
        throw ValidationError("window must be a positive integer", "window");
    }
    json lines = json::array();
    bool found = corpus.empty();
    for (const auto& c : corpora_) {
      if (!corpus.empty() && c.name != corpus) continue;
      found = true;
      for (const auto& l : lexaudit::concordance(c, term, w)) {
        json j = to_json(l);
        j["text"] = l.text();
        lines.push_back(std::move(j));
      }
    }
    if (!found) throw NotFoundError("unknown corpus '" + corpus + "'", "corpus");
    return {200, json{{"term", term}, {"window", w}, {"lines", lines}}};
  });
}

ApiResponse AnnotationService::create_session(const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json j = parse_body(body);
    const auto raters = required<std::vector<std::string>>(j, "raters");
    std::vector<Candidate> chosen;
    if (j.contains("terms")) {
      const auto terms = required<std::vector<std::string>>(j, "terms");
      for (const auto& t : terms)
        if (std::none_of(candidates_.begin(), candidates_.end(), [&](const Candidate& c) { return c.term == t; }))
          throw NotFoundError("unknown term '" + t + "'", "terms");
      for (const auto& c : candidates_)
        if (std::find(terms.begin(), terms.end(), c.term) != terms.end()) chosen.push_back(c);
    } else {
      chosen = candidates_;
    }

    std::unique_lock lock(sessions_mutex_);
    std::string id = optional_field<std::string>(j, "id", "");
    if (id.empty()) {
      do id = "s" + std::to_string(next_id_++);
      while (sessions_.count(id));
    } else if (sessions_.count(id)) {
      throw ConflictError("session '" + id + "' already exists");
    }
    auto slot = std::make_shared<Slot>();
    slot->session = Session(id, std::move(chosen), raters);
    record(created_event(slot->session, now_utc()));
    sessions_.emplace(id, slot);
    return {201, session_json(slot->session)};
  });
}

ApiResponse AnnotationService::session(const std::string& id) const {
  return guarded([&]() -> ApiResponse {
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    return {200, session_json(slot->session)};
  });
}

ApiResponse AnnotationService::next(const std::string& id, const std::string& rater) const {
  return guarded([&]() -> ApiResponse {
    if (rater.empty()) throw ValidationError("missing 'rater'", "rater");
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    const auto term = slot->session.next_for(rater);
    return {200, json{{"rater", rater},
                      {"term", term ? json(*term) : json(nullptr)},
                      {"candidate", term ? to_json(slot->session.candidate(*term)) : json(nullptr)}}};
  });
}

ApiResponse AnnotationService::rate(const std::string& id, const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json j = parse_body(body);
    RatingEvent e{required<std::string>(j, "rater"), required<std::string>(j, "term"),
                  Rating{required<bool>(j, "ambiguous"), optional_field<std::string>(j, "note", ""),
                         optional_field<std::string>(j, "example_ref", "")}};
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    Session updated = slot->session;
    updated.rate(e.rater, e.term, e.rating);
    record(rated_event(id, e, now_utc()));
    slot->session = std::move(updated);
    const auto next = slot->session.next_for(e.rater);
    return {200, json{{"term", e.term},
                      {"status", std::string(to_string(slot->session.status(e.term)))},
                      {"next", next ? json(*next) : json(nullptr)}}};
  });
}

ApiResponse AnnotationService::resolve(const std::string& id, const std::string& body) {
  return guarded([&]() -> ApiResponse {
    const json j = parse_body(body);
    const auto term = required<std::string>(j, "term");
    Resolution r{required<bool>(j, "decision"), optional_field<std::string>(j, "note", "")};
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    Session updated = slot->session;
    updated.resolve(term, r);
    record(resolved_event(id, term, r, now_utc()));
    slot->session = std::move(updated);
    return {200, json{{"term", term}, {"status", "resolved"}, {"decision", r.decision}}};
  });
}

ApiResponse AnnotationService::alpha(const std::string& id) const {
  return guarded([&]() -> ApiResponse {
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    const Session& s = slot->session;
    json per_term = json::object();
    for (const auto& c : s.candidates()) per_term[c.term] = nullable(try_alpha([&] { return term_alpha(s, c.term); }));
    return {200, json{{"alpha", nullable(try_alpha([&] { return session_alpha(s); }))}, {"per_term", per_term}}};
  });
}

ApiResponse AnnotationService::export_ava(const std::string& id) const {
  return guarded([&]() -> ApiResponse {
    auto slot = find(id);
    std::lock_guard lock(slot->mutex);
    return {200, json{{"jsonl", lexaudit::export_ava(slot->session)}}};
  });
}

void AnnotationService::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get("/candidates", [this, send](const httplib::Request&, httplib::Response& res) { send(res, candidates()); });
  server.Get("/concordance", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, concordance(req.get_param_value("term"), req.get_param_value("corpus"), req.get_param_value("window")));
  });
  server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.body));
  });
  server.Get(R"(/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, session(req.matches[1]));
  });
  server.Get(R"(/sessions/([^/]+)/next)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, next(req.matches[1], req.get_param_value("rater")));
  });
  server.Post(R"(/sessions/([^/]+)/ratings)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, rate(req.matches[1], req.body));
  });
  server.Post(R"(/sessions/([^/]+)/resolutions)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, resolve(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([^/]+)/alpha)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, alpha(req.matches[1]));
  });
  server.Get(R"(/sessions/([^/]+)/export)", [this, send](const httplib::Request& req, httplib::Response& res) {
    const auto r = export_ava(req.matches[1]);
    if (r.status != 200) return send(res, r);
    res.status = 200;
    res.set_content(r.body["jsonl"].get<std::string>(), "application/x-ndjson");
  });
}

void serve(const Config& config, const Workspace& workspace) {
  const auto& s = config.service;
  if (!is_loopback(s.bind) && !s.unsafe_bind)
    throw ValidationError("binding to '" + s.bind + "' requires the unsafe flag", "bind");
  AnnotationService service(workspace.corpora, candidates_for(workspace), s.journal);
  httplib::Server server;
  service.mount(server);
  if (!server.listen(s.bind, s.port)) throw IoError("cannot listen on " + s.bind + ":" + std::to_string(s.port));
}

}  // namespace lexaudit
