#include "lexaudit/stemmer.hpp"

#include <array>
#include <utility>

namespace lexaudit {
namespace {

bool is_vowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::string_view(w).substr(w.size() - suffix.size()) == suffix;
}

bool starts_with(const std::string& w, std::string_view prefix) {
  return std::string_view(w).substr(0, prefix.size()) == prefix;
}

bool has_vowel(const std::string& w, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end; ++i)
    if (is_vowel(w[i])) return true;
  return false;
}

// Position after the first non-vowel that follows a vowel, searching from start.
std::size_t region_after(const std::string& w, std::size_t start) {
  for (std::size_t i = start + 1; i < w.size(); ++i)
    if (is_vowel(w[i - 1]) && !is_vowel(w[i])) return i + 1;
  return w.size();
}

// Short syllable ending just before `end`.
bool short_syllable(const std::string& w, std::size_t end) {
  if (end == 2) return is_vowel(w[0]) && !is_vowel(w[1]);
  if (end < 3) return false;
  const char last = w[end - 1];
  return !is_vowel(w[end - 3]) && is_vowel(w[end - 2]) && !is_vowel(last) &&
         last != 'w' && last != 'x' && last != 'Y';
}

bool valid_li(char c) {
  switch (c) {
    case 'c': case 'd': case 'e': case 'g': case 'h':
    case 'k': case 'm': case 'n': case 'r': case 't':
      return true;
    default:
      return false;
  }
}

void replace_suffix(std::string& w, std::size_t suffix_len, std::string_view with) {
  w.resize(w.size() - suffix_len);
  w.append(with);
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Longest matching suffix from a table; nullptr when none.
template <std::size_t N>
const Rule* longest_match(const std::string& w, const std::array<Rule, N>& rules) {
  const Rule* best = nullptr;
  for (const auto& r : rules)
    if (ends_with(w, r.suffix) && (!best || r.suffix.size() > best->suffix.size()))
      best = &r;
  return best;
}

bool exception1(std::string& w) {
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 18> table{{
      {"skis", "ski"},     {"skies", "sky"},    {"dying", "die"},
      {"lying", "lie"},    {"tying", "tie"},    {"idly", "idl"},
      {"gently", "gentl"}, {"ugly", "ugli"},    {"early", "earli"},
      {"only", "onli"},    {"singly", "singl"}, {"sky", "sky"},
      {"news", "news"},    {"howe", "howe"},    {"atlas", "atlas"},
      {"cosmos", "cosmos"}, {"bias", "bias"},   {"andes", "andes"},
  }};
  for (const auto& [from, to] : table) {
    if (w == from) {
      w = std::string(to);
      return true;
    }
  }
  return false;
}

bool exception2(const std::string& w) {
  static constexpr std::array<std::string_view, 8> words{
      "inning", "outing", "canning", "herring",
      "earring", "proceed", "exceed", "succeed"};
  for (auto x : words)
    if (w == x) return true;
  return false;
}

void prelude(std::string& w) {
  if (!w.empty() && w[0] == '\'') w.erase(0, 1);
  if (!w.empty() && w[0] == 'y') w[0] = 'Y';
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == 'y' && is_vowel(w[i - 1])) w[i] = 'Y';
}

void step0(std::string& w) {
  for (std::string_view s : {"'s'", "'s", "'"}) {
    if (ends_with(w, s)) {
      w.resize(w.size() - s.size());
      return;
    }
  }
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    replace_suffix(w, 4, "ss");
  } else if (ends_with(w, "ied") || ends_with(w, "ies")) {
    replace_suffix(w, 3, w.size() > 4 ? "i" : "ie");
  } else if (ends_with(w, "us") || ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    if (w.size() >= 2 && has_vowel(w, 0, w.size() - 2)) w.pop_back();
  }
}

void step1b(std::string& w, std::size_t r1) {
  static constexpr std::array<Rule, 6> rules{{
      {"eed", ""}, {"eedly", ""}, {"ed", ""},
      {"edly", ""}, {"ing", ""}, {"ingly", ""},
  }};
  const Rule* r = longest_match(w, rules);
  if (!r) return;
  const std::size_t start = w.size() - r->suffix.size();
  if (r->suffix == "eed" || r->suffix == "eedly") {
    if (start >= r1) replace_suffix(w, r->suffix.size(), "ee");
    return;
  }
  if (!has_vowel(w, 0, start)) return;
  w.resize(start);
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
    return;
  }
  for (std::string_view d : {"bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt"}) {
    if (ends_with(w, d)) {
      w.pop_back();
      return;
    }
  }
  if (w.size() == r1 && short_syllable(w, w.size())) w.push_back('e');
}

void step1c(std::string& w) {
  const std::size_t n = w.size();
  if (n >= 3 && (w[n - 1] == 'y' || w[n - 1] == 'Y') && !is_vowel(w[n - 2]))
    w[n - 1] = 'i';
}

void step2(std::string& w, std::size_t r1) {
  static constexpr std::array<Rule, 24> rules{{
      {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
      {"abli", "able"},   {"entli", "ent"},   {"izer", "ize"},
      {"ization", "ize"}, {"ational", "ate"}, {"ation", "ate"},
      {"ator", "ate"},    {"alism", "al"},    {"aliti", "al"},
      {"alli", "al"},     {"fulness", "ful"}, {"ousli", "ous"},
      {"ousness", "ous"}, {"iveness", "ive"}, {"iviti", "ive"},
      {"biliti", "ble"},  {"bli", "ble"},     {"ogi", "og"},
      {"fulli", "ful"},   {"lessli", "less"}, {"li", ""},
  }};
  const Rule* r = longest_match(w, rules);
  if (!r) return;
  const std::size_t start = w.size() - r->suffix.size();
  if (start < r1) return;
  if (r->suffix == "ogi" && (start == 0 || w[start - 1] != 'l')) return;
  if (r->suffix == "li" && (start == 0 || !valid_li(w[start - 1]))) return;
  replace_suffix(w, r->suffix.size(), r->replacement);
}

void step3(std::string& w, std::size_t r1, std::size_t r2) {
  static constexpr std::array<Rule, 9> rules{{
      {"tional", "tion"}, {"ational", "ate"}, {"alize", "al"},
      {"icate", "ic"},    {"iciti", "ic"},    {"ical", "ic"},
      {"ful", ""},        {"ness", ""},       {"ative", ""},
  }};
  const Rule* r = longest_match(w, rules);
  if (!r) return;
  const std::size_t start = w.size() - r->suffix.size();
  if (start < r1) return;
  if (r->suffix == "ative" && start < r2) return;
  replace_suffix(w, r->suffix.size(), r->replacement);
}

void step4(std::string& w, std::size_t r2) {
  static constexpr std::array<Rule, 18> rules{{
      {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},   {"ic", ""},
      {"able", ""}, {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
      {"ent", ""},  {"ism", ""},  {"ate", ""},  {"iti", ""},  {"ous", ""},
      {"ive", ""},  {"ize", ""},  {"ion", ""},
  }};
  const Rule* r = longest_match(w, rules);
  if (!r) return;
  const std::size_t start = w.size() - r->suffix.size();
  if (start < r2) return;
  if (r->suffix == "ion" && (start == 0 || (w[start - 1] != 's' && w[start - 1] != 't')))
    return;
  w.resize(start);
}

void step5(std::string& w, std::size_t r1, std::size_t r2) {
  if (w.empty()) return;
  const std::size_t start = w.size() - 1;
  if (w.back() == 'e') {
    if (start >= r2 || (start >= r1 && !short_syllable(w, start))) w.pop_back();
  } else if (w.back() == 'l') {
    if (start >= r2 && start > 0 && w[start - 1] == 'l') w.pop_back();
  }
}

}  // namespace

std::string stem(std::string_view word) {
  std::string w(word);
  if (exception1(w)) return w;
  if (w.size() < 3) return w;

  prelude(w);

  std::size_t r1 = region_after(w, 0);
  for (std::string_view p : {"gener", "commun", "arsen"}) {
    if (starts_with(w, p)) {
      r1 = p.size();
      break;
    }
  }
  const std::size_t r2 = region_after(w, r1);

  step0(w);
  step1a(w);
  if (!exception2(w)) {
    step1b(w, r1);
    step1c(w);
    step2(w, r1);
    step3(w, r1, r2);
    step4(w, r2);
    step5(w, r1, r2);
  }

  for (auto& c : w)
    if (c == 'Y') c = 'y';
  return w;
}

}  // namespace lexaudit
