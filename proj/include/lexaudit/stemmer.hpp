#pragma once

#include <string>
#include <string_view>

namespace lexaudit {

/// Porter2 (Snowball English) stem of an already-lowercased word.
///
/// Follows the classic Snowball English algorithm: exceptional forms,
/// R1/R2 regions (with the gener/commun/arsen prefixes), steps 0 to 5 and the
/// y/Y prelude and postlude. Words shorter than three characters are returned
/// unchanged. Not idempotent: stem("accidental") is "accident" but
/// stem("accident") is "accid".
std::string stem(std::string_view word);

}  // namespace lexaudit
