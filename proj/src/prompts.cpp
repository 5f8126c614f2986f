#include "ontocrawl/prompts.hpp"

#include <cctype>
#include <vector>

#include "ontocrawl/errors.hpp"
#include "ontocrawl/names.hpp"

namespace ontocrawl {

namespace {

constexpr std::string_view kListingBody =
    "{lineage}List all of the most important subcategories of {C}. Skip "
    "explanations and use a comma-separated format like this: important "
    "subcategory, another important subcategory, another important "
    "subcategory, etc.";

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

const std::string* lookup(const Bindings& b, std::string_view key) {
  auto it = b.find(key);
  return it == b.end() ? nullptr : &it->second;
}

std::string with_period(std::string text) {
  text = trim(text);
  if (!text.empty() && text.back() != '.' && text.back() != '!' &&
      text.back() != '?') {
    text.push_back('.');
  }
  return text;
}

}  // namespace

std::string_view template_body(PromptTemplate t) {
  switch (t) {
    case PromptTemplate::existence:
      return "{lineage}Are there any generally accepted subcategories of {C}? "
             "Answer only with yes or no.";
    case PromptTemplate::listing:
      return kListingBody;
    case PromptTemplate::listing_continuation:
      return "{lineage}List all of the most important subcategories of {C}. "
             "Skip explanations and use a comma-separated format like this: "
             "important subcategory, another important subcategory, another "
             "important subcategory, etc. Start your answer with \"{t}\".";
    case PromptTemplate::description:
      return "{list}\n\nGive a brief description of every term on the list, "
             "considered as a subcategory of {C}, without the use of examples, "
             "in the following form: List element 1: brief description for "
             "list element 1. List element 2: brief description for list "
             "element 2. ...";
    case PromptTemplate::verify_instance:
      return "Is {D} a specific instance or a subcategory of the category "
             "{C0}? Answer only with Instance or Subcategory.";
    case PromptTemplate::verify_part:
      return "Is {D} a part or a subcategory of the category {C0}? Answer "
             "only with Part or Subcategory.";
    case PromptTemplate::verify_seed:
      return "Can {D} be considered a subcategory of {C0}? Answer only with "
             "yes or no.";
    case PromptTemplate::verify_subcat:
      return "{seed_lineage}Is {D} typically understood as a subcategory of "
             "{C}? Answer only with yes or no.";
    case PromptTemplate::rename:
      return "{seed_lineage}The following description outlines the "
             "characteristics of a subcategory of {C}. Provide a concise and "
             "unambiguous name for it. Provide only the name without any "
             "explanation.\n{desc}";
    case PromptTemplate::synonym_interchangeable:
      return "In the context of {C0}, are {D1} and {D2} typically used "
             "interchangeably? Answer only with yes or no.";
    case PromptTemplate::synonym_direction:
      return "Consider the terms {D1} and {D2}. Which of the terms is a "
             "subcategory of the other one? Answer in the following scheme: "
             "[[X]] is a subcategory of [[Y]].";
  }
  throw TemplateError("unknown prompt template");
}

std::string render(PromptTemplate t, const Bindings& bindings,
                   const OracleContext& ctx) {
  const std::string_view body = template_body(t);
  const std::string seed = lookup(bindings, "C0") ? *lookup(bindings, "C0")
                                                  : ctx.seed_name;
  if (is_blank(seed)) {
    throw TemplateError("unbound placeholder {C0} in template " +
                        std::string(to_string(t)));
  }

  // Names that occur in the prompt, in order of first appearance.
  std::vector<std::string> mentioned;
  auto mention = [&](const std::string& name) {
    for (const auto& m : mentioned) {
      if (same_name(m, name)) return;
    }
    mentioned.push_back(name);
  };

  auto require = [&](std::string_view key) -> const std::string& {
    const auto* v = lookup(bindings, key);
    if (v == nullptr) {
      throw TemplateError("unbound placeholder {" + std::string(key) +
                          "} in template " + std::string(to_string(t)));
    }
    return *v;
  };

  std::string out;
  out.reserve(body.size() + 128);
  for (std::size_t i = 0; i < body.size();) {
    if (body[i] != '{') {
      out.push_back(body[i++]);
      continue;
    }
    std::size_t j = i + 1;
    while (j < body.size() && is_key_char(body[j])) ++j;
    if (j == i + 1 || j >= body.size() || body[j] != '}') {
      out.push_back(body[i++]);
      continue;
    }
    const std::string_view key = body.substr(i + 1, j - i - 1);
    i = j + 1;

    if (key == "C0") {
      mention(seed);
      out += seed;
    } else if (key == "lineage") {
      const auto& c = require("C");
      if (same_name(c, seed)) continue;
      const auto& parent = ctx.parent_name;
      if (!parent || same_name(*parent, seed)) {
        mention(seed);
        out += c + " is a subcategory of " + seed + ". ";
      } else {
        mention(seed);
        mention(*parent);
        out += *parent + " is a subcategory of " + seed + ". " + c +
               " is a subcategory of " + *parent + ". ";
      }
    } else if (key == "seed_lineage") {
      const auto& c = require("C");
      if (same_name(c, seed)) continue;
      mention(seed);
      out += c + " is a subcategory of " + seed + ". ";
    } else {
      const auto& value = require(key);
      if (key == "C" || key == "D" || key == "D1" || key == "D2") {
        mention(value);
      }
      out += value;
    }
  }

  std::string block;
  for (const auto& name : mentioned) {
    const auto* text = ctx.description_for(name);
    if (text == nullptr || is_blank(*text)) continue;
    block += "\n" + name + ": " + with_period(*text);
  }
  if (!block.empty()) out += "\n" + block;
  return out;
}

}  // namespace ontocrawl
