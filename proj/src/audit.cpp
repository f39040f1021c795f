#include "lexaudit/audit.hpp"

#include <algorithm>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "lexaudit/error.hpp"
#include "lexaudit/glob.hpp"
#include "text.hpp"

namespace lexaudit {

void check_compatible(const Dictionary& d, const PipelineProfile& p) {
  for (Category c : d.categories()) {
    const auto where = "dictionary '" + d.name + "' has " + std::string(to_string(c)) + " entries but profile '" +
                       p.name + "' ";
    switch (c) {
      case Category::pronoun:
        if (p.remove_stopwords) throw ConfigError(where + "removes stop words (use the pronouns profile)");
        if (p.stem) throw ConfigError(where + "stems tokens");
        break;
      case Category::gendered_language:
        if (!p.stem) throw ConfigError(where + "does not stem tokens");
        break;
      case Category::marked_word:
      case Category::name:
        if (p.stem) throw ConfigError(where + "stems tokens");
        break;
    }
  }
}

std::vector<std::string> default_exclusions(Category c) {
  if (c == Category::name) return {"alexa", "siri", "olly"};
  return {};
}

namespace {

// Literal patterns are hashed; wildcard patterns are scanned.
class CompiledDictionary {
 public:
  explicit CompiledDictionary(const Dictionary& d) {
    for (std::size_t i = 0; i < d.entries.size(); ++i) {
      const auto& e = d.entries[i];
      Space& s = e.category == Category::gendered_language ? stems_ : norms_;
      GlobMatcher m(e.pattern);
      if (m.is_literal())
        s.literal[e.pattern].push_back(i);
      else
        s.wildcard.emplace_back(i, std::move(m));
    }
  }

  // Entry indices matching a token, ascending.
  std::vector<std::size_t> match(const Token& t) const {
    std::vector<std::size_t> hits;
    collect(stems_, t.stem, hits);
    collect(norms_, t.norm, hits);
    std::sort(hits.begin(), hits.end());
    return hits;
  }

 private:
  struct Space {
    std::unordered_map<std::string, std::vector<std::size_t>> literal;
    std::vector<std::pair<std::size_t, GlobMatcher>> wildcard;
  };

  static void collect(const Space& s, const std::string& form, std::vector<std::size_t>& hits) {
    if (auto it = s.literal.find(form); it != s.literal.end()) hits.insert(hits.end(), it->second.begin(), it->second.end());
    for (const auto& [i, m] : s.wildcard)
      if (m.matches(form)) hits.push_back(i);
  }

  Space stems_;
  Space norms_;
};

void match_range(const Corpus& c, std::size_t begin, std::size_t end, const Dictionary& d,
                 const CompiledDictionary& compiled, const PipelineProfile& p, const StopWords& sw,
                 const std::unordered_set<std::string>& excluded, std::vector<Match>& out) {
  for (std::size_t u = begin; u < end; ++u) {
    const auto& utt = c.utterances[u];
    for (const auto& t : tokenize(utt, p, sw)) {
      if (excluded.count(t.norm)) continue;
      for (std::size_t i : compiled.match(t)) {
        const auto& e = d.entries[i];
        out.push_back(Match{i, e.term, e.pattern, e.gender, e.category, utt.partition, utt.id, t.index, t.surface,
                            e.category == Category::gendered_language ? t.stem : t.norm, e.ambiguous});
      }
    }
  }
}

}  // namespace

MatchSet run_audit(const Corpus& c, const Dictionary& d, const PipelineProfile& p, const AuditOptions& options) {
  check_compatible(d, p);
  const StopWords& sw = options.stopwords ? *options.stopwords : StopWords::snowball_english();

  MatchSet m;
  m.corpus_name = c.name;
  m.profile_name = p.name;
  m.exclusions = options.exclusions;
  m.partitions = c.partitions();
  m.dictionary = options.ava ? subtract(d, options.ava->entries, options.ava->mode, sw).dictionary : d;
  m.dictionary_name = m.dictionary.name;

  std::unordered_set<std::string> excluded;
  for (const auto& x : options.exclusions) excluded.insert(detail::ascii_lower(x));

  const CompiledDictionary compiled(m.dictionary);
  const std::size_t n = c.utterances.size();
  const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(n, 1));
  std::vector<std::vector<Match>> parts(threads);
  if (threads == 1) {
    match_range(c, 0, n, m.dictionary, compiled, p, sw, excluded, parts[0]);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = n * t / threads, end = n * (t + 1) / threads;
      pool.emplace_back([&, t, begin, end] {
        match_range(c, begin, end, m.dictionary, compiled, p, sw, excluded, parts[t]);
      });
    }
  }
  for (auto& part : parts) std::move(part.begin(), part.end(), std::back_inserter(m.matches));
  std::sort(m.matches.begin(), m.matches.end(), [](const Match& a, const Match& b) {
    return std::tie(a.utterance_id, a.token_index, a.entry_index) <
           std::tie(b.utterance_id, b.token_index, b.entry_index);
  });
  return m;
}

DictShare dict_share(const MatchSet& m, const Dictionary& d) {
  std::set<std::pair<std::string, GenderClass>> hit;
  for (const auto& x : m.matches) hit.insert({x.pattern, x.gender});
  DictShare s;
  s.total_terms = d.total();
  for (const auto& e : d.entries)
    if (hit.count({e.pattern, e.gender})) ++s.matched_terms;
  s.fraction = s.total_terms ? static_cast<double>(s.matched_terms) / static_cast<double>(s.total_terms) : 0.0;
  return s;
}

std::int64_t ReportRow::total() const {
  std::int64_t t = 0;
  for (const auto& [g, f] : frequencies) t += f;
  return t;
}

AuditReport frequency_table(const MatchSet& m) {
  AuditReport r;
  r.corpus_name = m.corpus_name;
  r.dictionary_name = m.dictionary_name;
  r.profile_name = m.profile_name;
  r.share = dict_share(m);

  std::set<GenderClass> genders;
  for (const auto& e : m.dictionary.entries) genders.insert(e.gender);
  for (const auto& x : m.matches) genders.insert(x.gender);
  r.genders.assign(genders.begin(), genders.end());

  std::vector<std::string> labels;
  for (Partition p : m.partitions) labels.emplace_back(to_string(p));
  std::sort(labels.begin(), labels.end());

  auto blank_row = [&](std::string label) {
    ReportRow row{std::move(label), {}, {}};
    for (GenderClass g : r.genders) row.frequencies[g] = 0;
    return row;
  };
  r.rows.push_back(blank_row("overall"));
  for (auto& l : labels) r.rows.push_back(blank_row(l));

  for (const auto& x : m.matches) {
    const auto label = to_string(x.partition);
    auto it = std::find_if(r.rows.begin() + 1, r.rows.end(), [&](const ReportRow& row) { return row.label == label; });
    if (it == r.rows.end()) {
      r.rows.push_back(blank_row(std::string(label)));
      it = r.rows.end() - 1;
    }
    ++it->frequencies[x.gender];
    ++r.rows.front().frequencies[x.gender];
  }
  std::sort(r.rows.begin() + 1, r.rows.end(), [](const ReportRow& a, const ReportRow& b) { return a.label < b.label; });

  for (auto& row : r.rows) {
    const auto total = row.total();
    for (GenderClass g : r.genders)
      row.ratios[g] = total > 0 ? std::optional<double>(static_cast<double>(row.frequencies[g]) / static_cast<double>(total))
                                : std::nullopt;
  }
  r.total_instances = r.rows.front().total();
  return r;
}

std::vector<TermCount> top_terms(const MatchSet& m, std::size_t k) {
  std::map<std::pair<std::string, GenderClass>, std::int64_t> counts;
  for (const auto& x : m.matches) ++counts[{x.term, x.gender}];
  std::vector<TermCount> out;
  out.reserve(counts.size());
  for (const auto& [key, f] : counts) out.push_back({key.first, key.second, f});
  std::stable_sort(out.begin(), out.end(), [](const TermCount& a, const TermCount& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return std::tie(a.term, a.gender) < std::tie(b.term, b.gender);
  });
  if (out.size() > k) out.resize(k);
  return out;
}

Table2x2 cross_table(const AuditReport& a, const AuditReport& b, std::array<GenderClass, 2> genders) {
  Table2x2 t{};
  const AuditReport* reports[] = {&a, &b};
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& rep = *reports[i];
    if (rep.rows.empty() || rep.total_instances == 0)
      throw ValidationError("report '" + rep.corpus_name + "' has no instances", "report");
    for (std::size_t j = 0; j < 2; ++j) {
      auto it = rep.overall().frequencies.find(genders[j]);
      if (it == rep.overall().frequencies.end())
        throw ValidationError("report '" + rep.corpus_name + "' has no " + std::string(to_string(genders[j])) +
                                  " column",
                              "gender");
      t[i][j] = it->second;
    }
  }
  return t;
}

std::string matches_to_jsonl(const MatchSet& m) {
  std::string out;
  for (const auto& x : m.matches) {
    nlohmann::ordered_json obj;
    obj["term"] = x.term;
    obj["gender"] = std::string(gender_code(x.gender));
    obj["category"] = std::string(to_string(x.category));
    obj["corpus"] = m.corpus_name;
    obj["partition"] = std::string(to_string(x.partition));
    obj["utterance_id"] = x.utterance_id;
    obj["index"] = x.token_index;
    obj["ambiguous"] = x.ambiguous;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

}  // namespace lexaudit
