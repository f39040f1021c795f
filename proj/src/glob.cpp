#include "lexaudit/glob.hpp"

#include "lexaudit/error.hpp"
#include "text.hpp"

namespace lexaudit {

GlobMatcher::GlobMatcher(std::string_view pattern)
    : pattern_(detail::ascii_lower(pattern)), literal_(!has_wildcard(pattern)) {
  if (pattern_.empty()) throw ValidationError("empty glob pattern", "pattern");
}

// Linear-time backtracking over the most recent `*` only.
bool GlobMatcher::matches(std::string_view token) const noexcept {
  if (literal_) return token == pattern_;
  const std::string_view p = pattern_;
  std::size_t pi = 0, ti = 0;
  std::size_t star = std::string_view::npos, resume = 0;
  while (ti < token.size()) {
    if (pi < p.size() && (p[pi] == '?' || p[pi] == token[ti])) {
      ++pi;
      ++ti;
    } else if (pi < p.size() && p[pi] == '*') {
      star = pi++;
      resume = ti;
    } else if (star != std::string_view::npos) {
      pi = star + 1;
      ti = ++resume;
    } else {
      return false;
    }
  }
  while (pi < p.size() && p[pi] == '*') ++pi;
  return pi == p.size();
}

}  // namespace lexaudit
