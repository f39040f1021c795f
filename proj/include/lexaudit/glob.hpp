#pragma once

#include <string>
#include <string_view>

namespace lexaudit {

/// Anchored glob over whole tokens: `*` matches any run of characters
/// (including none), `?` exactly one character, everything else literally.
/// Patterns are lowercased at compile time; tokens are expected lowercase.
class GlobMatcher {
 public:
  /// Throws ValidationError on an empty pattern.
  explicit GlobMatcher(std::string_view pattern);

  bool matches(std::string_view token) const noexcept;

  const std::string& pattern() const noexcept { return pattern_; }
  bool is_literal() const noexcept { return literal_; }

 private:
  std::string pattern_;
  bool literal_ = true;
};

inline GlobMatcher compile_glob(std::string_view pattern) { return GlobMatcher(pattern); }

inline bool has_wildcard(std::string_view pattern) noexcept {
  return pattern.find_first_of("*?") != std::string_view::npos;
}

}  // namespace lexaudit
