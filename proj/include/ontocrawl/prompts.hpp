#pragma once

#include <map>
#include <string>
#include <string_view>

#include "ontocrawl/oracle.hpp"

namespace ontocrawl {

using PromptTemplate = QueryKind;

// Values for the placeholders of a template: C0, C, D, D1, D2, t, list, desc.
using Bindings = std::map<std::string, std::string, std::less<>>;

// Raw template text. Besides the plain placeholders, two are derived from the
// context at render time:
//   {lineage}       "P is a subcategory of C0. C is a subcategory of P. "
//                   with P the discovering superconcept of C (shortened when
//                   P or C is the seed itself)
//   {seed_lineage}  "C is a subcategory of C0. " (empty when C is the seed)
std::string_view template_body(PromptTemplate t);

// Substitutes every placeholder and appends a block with the descriptions of
// the concepts named in the prompt, one "Name: description." line each.
// C0 defaults to ctx.seed_name. Throws TemplateError on an unbound
// placeholder.
std::string render(PromptTemplate t, const Bindings& bindings,
                   const OracleContext& ctx);

}  // namespace ontocrawl
