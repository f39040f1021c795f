// Independent reference implementations used by unit and acceptance tests.
// They are deliberately naive: regex instead of the glob matcher, a nested
// loop instead of the compiled dictionary, pair enumeration instead of the
// coincidence matrix.
#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lexaudit/audit.hpp"
#include "lexaudit/corpus.hpp"
#include "lexaudit/lexicon.hpp"
#include "lexaudit/stats.hpp"
#include "lexaudit/stemmer.hpp"

namespace oracle {

inline std::filesystem::path test_data() { return LEXAUDIT_TEST_DATA; }
inline std::filesystem::path shipped_data() { return LEXAUDIT_DATA_DIR; }

// ---------------------------------------------------------------------------
// Glob

inline std::regex glob_regex(const std::string& pattern) {
  std::string re;
  for (char c : pattern) {
    const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lc == '*')
      re += ".*";
    else if (lc == '?')
      re += '.';
    else if (std::string("\\^$.|+()[]{}").find(lc) != std::string::npos)
      re += std::string("\\") + lc;
    else
      re += lc;
  }
  return std::regex(re, std::regex::ECMAScript);
}

inline bool glob_match(const std::string& pattern, const std::string& token) {
  return std::regex_match(token, glob_regex(pattern));
}

// ---------------------------------------------------------------------------
// Tokenization, written from the documented rules

struct NaiveToken {
  std::size_t index;
  std::string norm;
  std::string stem;
};

inline std::vector<NaiveToken> naive_tokens(const std::string& text, const lexaudit::PipelineProfile& p,
                                            const lexaudit::StopWords& sw) {
  const std::string punct = ".,!?;:'\"()[]{}@#$%&*-";
  std::vector<NaiveToken> out;
  std::istringstream in(text);
  std::string w;
  for (std::size_t i = 0; in >> w; ++i) {
    std::string s = w;
    if (p.lowercase)
      for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (p.strip_punctuation) {
      std::size_t b = 0, e = s.size();
      while (b < e && punct.find(s[b]) != std::string::npos) ++b;
      while (e > b && punct.find(s[e - 1]) != std::string::npos) --e;
      std::string core = s.substr(b, e - b);
      // "@123" keeps its "@" so placeholders stay recognizable.
      const bool digits = !core.empty() && std::all_of(core.begin(), core.end(), ::isdigit);
      if (digits && b > 0 && s[b - 1] == '@') core = "@" + core;
      s = core;
    }
    if (s.empty()) continue;
    const bool placeholder = s.size() > 1 && s[0] == '@' && std::all_of(s.begin() + 1, s.end(), ::isdigit);
    if (placeholder && p.drop_placeholders) continue;
    if (p.remove_stopwords && sw.contains(s)) continue;
    out.push_back({i, s, p.stem && !placeholder ? lexaudit::stem(s) : s});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Audit

using Hit = std::tuple<std::string, std::size_t, std::size_t>;  // utterance, token index, entry index

inline std::vector<Hit> brute_force_hits(const lexaudit::Corpus& c, const lexaudit::Dictionary& d,
                                         const lexaudit::PipelineProfile& p, const std::vector<std::string>& exclusions,
                                         const lexaudit::StopWords& sw) {
  std::set<std::string> excluded;
  for (auto x : exclusions) {
    for (auto& ch : x) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    excluded.insert(x);
  }
  std::vector<Hit> out;
  for (const auto& u : c.utterances)
    for (const auto& t : naive_tokens(u.text, p, sw)) {
      if (excluded.count(t.norm)) continue;
      for (std::size_t i = 0; i < d.entries.size(); ++i) {
        const auto& e = d.entries[i];
        const auto& form = e.category == lexaudit::Category::gendered_language ? t.stem : t.norm;
        if (glob_match(e.pattern, form)) out.emplace_back(u.id, t.index, i);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Hit> hits_of(const lexaudit::MatchSet& m) {
  std::vector<Hit> out;
  for (const auto& x : m.matches) out.emplace_back(x.utterance_id, x.token_index, x.entry_index);
  return out;
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha by enumerating ordered pairs of values.
//
// Do = (1/n) sum_u 1/(m_u - 1) * #{ordered pairs within u that differ}
// De = 1/(n (n - 1)) * #{ordered pairs of pairable values that differ}

inline double alpha_by_pairs(const lexaudit::RatingsMatrix& r) {
  std::vector<std::vector<std::string>> units;
  for (const auto& [item, ratings] : r.values) {
    if (ratings.size() < 2) continue;
    std::vector<std::string> vs;
    for (const auto& [rater, v] : ratings) vs.push_back(v);
    units.push_back(std::move(vs));
  }
  std::vector<std::string> all;
  for (const auto& u : units) all.insert(all.end(), u.begin(), u.end());
  const double n = static_cast<double>(all.size());

  double d_o = 0.0;
  for (const auto& u : units) {
    double differ = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j)
        if (i != j && u[i] != u[j]) differ += 1.0;
    d_o += differ / static_cast<double>(u.size() - 1);
  }
  d_o /= n;

  double d_e = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j)
      if (i != j && all[i] != all[j]) d_e += 1.0;
  d_e /= n * (n - 1.0);

  if (d_e == 0.0) return 1.0;
  return 1.0 - d_o / d_e;
}

inline lexaudit::RatingsMatrix random_ratings(std::mt19937& rng) {
  std::uniform_int_distribution<int> items(2, 15), raters(2, 5), cats(2, 4), pct(0, 99);
  const int ni = items(rng), nr = raters(rng), nc = cats(rng);
  lexaudit::RatingsMatrix m;
  std::uniform_int_distribution<int> cat(0, nc - 1);
  for (int i = 0; i < ni; ++i)
    for (int r = 0; r < nr; ++r)
      if (pct(rng) >= 25) m.set("item" + std::to_string(i), "r" + std::to_string(r), "c" + std::to_string(cat(rng)));
  // Guarantee one pairable unit.
  m.set("item0", "r0", "c0");
  m.set("item0", "r1", "c" + std::to_string(cat(rng)));
  return m;
}

// ---------------------------------------------------------------------------
// Random small audit instances

struct Instance {
  lexaudit::Corpus corpus;
  lexaudit::Dictionary dictionary;
  lexaudit::PipelineProfile profile;
  std::vector<std::string> exclusions;
  std::vector<lexaudit::AvaEntry> ava;
};

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> v{
      "love",   "loves",  "loving", "loved", "strong", "stronger", "strength", "he",     "she",   "her",
      "him",    "they",   "them",   "xe",    "warm",   "warmly",   "kind",     "kinder", "power", "powered",
      "soft",   "softly", "the",    "a",     "is",     "will",     "john",     "mary",   "alexa", "siri",
      "olly",   "@123",   "@45",    "leader", "leading", "cheer",  "quiet",    "grill",  "x",     "connection"};
  return v;
}

inline std::string decorate(std::mt19937& rng, const std::string& w) {
  static const std::vector<std::string> pre{"", "", "", "(", "\"", "'", "@"};
  static const std::vector<std::string> post{"", "", "", ".", ",", "!", "?", "'", ")", "..."};
  std::uniform_int_distribution<std::size_t> a(0, pre.size() - 1), b(0, post.size() - 1);
  std::uniform_int_distribution<int> upper(0, 5);
  std::string s = w;
  if (upper(rng) == 0 && !s.empty() && std::isalpha(static_cast<unsigned char>(s[0])))
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return pre[a(rng)] + s + post[b(rng)];
}

inline Instance random_instance(std::mt19937& rng) {
  using namespace lexaudit;
  static const std::vector<PipelineProfile> profiles{PipelineProfile::gendered_language(), PipelineProfile::pronouns(),
                                                     PipelineProfile::marked_words(), PipelineProfile::names()};
  static const Category categories[] = {Category::gendered_language, Category::pronoun, Category::marked_word,
                                        Category::name};
  static const char* partitions[] = {"train", "dev", "test"};
  const auto& vocab = vocabulary();
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), which(0, 3), part(0, 2);
  std::uniform_int_distribution<int> n_utt(0, 12), n_tok(0, 9), n_entries(1, 8), coin(0, 3);

  Instance inst;
  const std::size_t k = which(rng);
  inst.profile = profiles[k];
  const Category category = categories[k];

  inst.corpus.name = "rand";
  const int nu = n_utt(rng);
  for (int u = 0; u < nu; ++u) {
    Utterance utt;
    utt.id = "u" + std::to_string(u);
    utt.partition = parse_partition(partitions[part(rng)]);
    const int nt = n_tok(rng);
    for (int t = 0; t < nt; ++t) utt.text += (t ? " " : "") + decorate(rng, vocab[pick(rng)]);
    inst.corpus.utterances.push_back(std::move(utt));
  }

  std::string dict;
  static const char* genders[] = {"masculine", "feminine", "neutral", "neo"};
  std::uniform_int_distribution<std::size_t> g(0, category == Category::pronoun ? 3 : 1);
  std::map<std::string, std::vector<std::string>> sections;
  const int ne = n_entries(rng);
  for (int e = 0; e < ne; ++e) {
    std::string w = vocab[pick(rng)];
    if (w[0] == '@') w = w.substr(1);
    const int mode = coin(rng);
    if (mode == 1 && w.size() > 2) w = w.substr(0, w.size() / 2) + "*";
    if (mode == 2 && w.size() > 1) w[w.size() / 2] = '?';
    sections[genders[g(rng)]].push_back(w);
  }
  for (const auto& [gender, words] : sections) {
    dict += "#" + gender + "\n";
    for (const auto& w : words) dict += w + "\n";
  }
  std::istringstream din(dict);
  LoadOptions opts;
  opts.name = "rand_dict";
  opts.category = category;
  inst.dictionary = parse_dictionary(din, DictFormat::categorical_list, opts).dictionary;

  if (coin(rng) == 0) inst.exclusions = {"alexa", "Siri"};
  std::uniform_int_distribution<int> n_ava(0, 4);
  const int na = n_ava(rng);
  for (int a = 0; a < na; ++a) {
    AvaEntry e;
    std::string w = vocab[pick(rng)];
    if (w[0] == '@') w = "x";
    e.term = w;
    e.original_gender = coin(rng) % 2 ? GenderClass::masculine : GenderClass::feminine;
    e.examples["rand"] = "example with " + w;
    inst.ava.push_back(std::move(e));
  }
  return inst;
}

}  // namespace oracle
