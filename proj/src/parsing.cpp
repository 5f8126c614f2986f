#include "ontocrawl/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"

namespace ontocrawl {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string first_word(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && !std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t j = i;
  while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
  return lower(text.substr(i, j - i));
}

std::string strip_item(std::string_view item) {
  std::string s = trim(item);
  while (!s.empty() && (s.back() == '.' || s.back() == ';')) {
    s.pop_back();
    s = trim(s);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = trim(std::string_view(s).substr(1, s.size() - 2));
  }
  return s;
}

bool is_etc(std::string_view item) {
  const auto l = lower(trim(item));
  return l == "etc" || l == "etc." || l == "and so on";
}

}  // namespace

std::vector<std::string> parse_csv_list(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!is_etc(current)) {
      auto item = strip_item(current);
      if (!item.empty()) out.push_back(std::move(item));
    }
    current.clear();
  };
  for (char c : text) {
    if (c == ',' || c == '\n') {
      flush();
    } else {
      current.push_back(c);
    }
  }
  flush();
  return out;
}

bool parse_yes_no(std::string_view text) {
  return parse_choice(text, {"yes", "no"}) == 0;
}

std::size_t parse_choice(std::string_view text,
                         const std::vector<std::string_view>& options) {
  const auto word = first_word(text);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (word == lower(options[i])) return i;
  }
  std::string expected;
  for (auto o : options) expected += (expected.empty() ? "" : "/") + std::string(o);
  throw ParseError("expected " + expected + " but got: " + std::string(text));
}

std::pair<std::string, std::string> parse_direction(std::string_view text) {
  static const std::regex kSpan(R"(\[\[([^\]]+)\]\])");
  const std::string s(text);
  std::vector<std::string> spans;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kSpan);
       it != std::sregex_iterator() && spans.size() < 2; ++it) {
    spans.push_back(trim((*it)[1].str()));
  }
  if (spans.size() < 2 || spans[0].empty() || spans[1].empty()) {
    throw ParseError("reply does not follow the [[X]] is a subcategory of [[Y]] "
                     "scheme: " + s);
  }
  return {spans[0], spans[1]};
}

ParsedDescriptions parse_descriptions(std::string_view text,
                                      const std::vector<std::string>& names) {
  std::map<std::string, std::string> by_key;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string l = trim(line);
    // List markers.
    if (!l.empty() && (l[0] == '-' || l[0] == '*')) l = trim(std::string_view(l).substr(1));
    std::size_t digits = 0;
    while (digits < l.size() && std::isdigit(static_cast<unsigned char>(l[digits]))) ++digits;
    if (digits > 0 && digits < l.size() && (l[digits] == '.' || l[digits] == ')')) {
      l = trim(std::string_view(l).substr(digits + 1));
    }
    l.erase(std::remove(l.begin(), l.end(), '*'), l.end());
    const auto colon = l.find(':');
    if (colon == std::string::npos) continue;
    auto name = trim(std::string_view(l).substr(0, colon));
    auto desc = trim(std::string_view(l).substr(colon + 1));
    if (name.empty() || desc.empty()) continue;
    by_key.emplace(normalize_name(name), std::move(desc));
  }

  ParsedDescriptions out;
  for (const auto& n : names) {
    auto it = by_key.find(normalize_name(n));
    if (it == by_key.end()) {
      out.by_name[n] = "";
      out.missing.push_back(n);
    } else {
      out.by_name[n] = it->second;
    }
  }
  return out;
}

std::vector<std::string> select_tokens(const std::map<std::string, int>& frequencies,
                                       int threshold) {
  std::vector<std::pair<std::string, int>> passing;
  for (const auto& [token, count] : frequencies) {
    if (count >= threshold) passing.emplace_back(token, count);
  }
  std::stable_sort(passing.begin(), passing.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(passing.size());
  for (auto& p : passing) out.push_back(std::move(p.first));
  return out;
}

}  // namespace ontocrawl
