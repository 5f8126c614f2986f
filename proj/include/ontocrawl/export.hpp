#pragma once

#include <string>
#include <string_view>

#include "ontocrawl/hierarchy.hpp"

namespace ontocrawl {

inline constexpr std::string_view kDefaultBaseIri = "http://example.org/ontocrawl#";

// Percent-encodes everything outside the RFC 3986 unreserved set, byte by
// byte of the UTF-8 form.
std::string percent_encode(std::string_view text);
std::string class_iri(std::string_view base_iri, std::string_view name);

// OWL 2 ontology in RDF/XML: one class per concept (labels, descriptions as
// comments, subclass axioms along the direct edges) and one class per
// synonym name declared equivalent to its concept. Concepts appear in id
// order. Throws EncodingError when a name or description is not valid
// UTF-8 or contains characters XML cannot carry.
std::string to_owl_rdfxml(const ConceptHierarchy& h,
                          std::string_view base_iri = kDefaultBaseIri);

// Graphviz digraph, edges from superconcept to subconcept.
std::string to_dot(const ConceptHierarchy& h);

}  // namespace ontocrawl
