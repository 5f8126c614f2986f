#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ontocrawl {

// Splits a comma-separated answer into names: items are trimmed, empty items
// and a trailing "etc." are dropped, as is a final full stop.
std::vector<std::string> parse_csv_list(std::string_view text);

// Case-insensitive "yes"/"no" on the first alphabetic word. Throws ParseError
// otherwise.
bool parse_yes_no(std::string_view text);

// Matches the first alphabetic word against `options` (case-insensitive) and
// returns the index of the match. Throws ParseError when none matches.
std::size_t parse_choice(std::string_view text,
                         const std::vector<std::string_view>& options);

// Extracts (X, Y) from "[[X]] is a subcategory of [[Y]]". Throws ParseError
// when two bracketed spans are not present.
std::pair<std::string, std::string> parse_direction(std::string_view text);

struct ParsedDescriptions {
  std::map<std::string, std::string> by_name;  // keyed by the requested names
  std::vector<std::string> missing;
};

// Parses "Name: description" lines and matches them against the requested
// names after normalization. Leading list markers ("1.", "-", "*") and
// markdown bold are ignored.
ParsedDescriptions parse_descriptions(std::string_view text,
                                      const std::vector<std::string>& names);

// Tokens whose frequency reaches `threshold`, most frequent first, ties in
// lexicographic order.
std::vector<std::string> select_tokens(const std::map<std::string, int>& frequencies,
                                       int threshold);

}  // namespace ontocrawl
