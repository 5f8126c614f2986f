#pragma once

#include <string>
#include <string_view>

namespace ontocrawl {

// Duplicate-detection key for a concept name: surrounding whitespace trimmed,
// internal whitespace runs collapsed to one space, ASCII letters lowercased.
std::string normalize_name(std::string_view name);

bool same_name(std::string_view a, std::string_view b);

// Trims surrounding whitespace; casing and inner spacing are kept.
std::string trim(std::string_view text);

bool is_blank(std::string_view text);

}  // namespace ontocrawl
