#include "ontocrawl/export.hpp"

#include <sstream>

#include "ontocrawl/errors.hpp"

namespace ontocrawl {

namespace {

// Length of the UTF-8 sequence starting at `i`, or 0 when malformed.
std::size_t utf8_length(std::string_view s, std::size_t i, char32_t& cp) {
  const auto b = static_cast<unsigned char>(s[i]);
  std::size_t n = 0;
  if (b < 0x80) {
    cp = b;
    return 1;
  } else if ((b & 0xE0) == 0xC0) {
    n = 2;
    cp = b & 0x1F;
  } else if ((b & 0xF0) == 0xE0) {
    n = 3;
    cp = b & 0x0F;
  } else if ((b & 0xF8) == 0xF0) {
    n = 4;
    cp = b & 0x07;
  } else {
    return 0;
  }
  if (i + n > s.size()) return 0;
  for (std::size_t k = 1; k < n; ++k) {
    const auto c = static_cast<unsigned char>(s[i + k]);
    if ((c & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (c & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMin[n] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  return n;
}

// Checks that `text` is UTF-8 made of characters allowed in XML 1.0.
// Line breaks and tabs are allowed only when `multiline` is set.
void check_encodable(std::string_view text, bool multiline) {
  for (std::size_t i = 0; i < text.size();) {
    char32_t cp = 0;
    const auto n = utf8_length(text, i, cp);
    if (n == 0) throw EncodingError("not valid UTF-8", std::string(text));
    const bool space = cp == '\t' || cp == '\n' || cp == '\r';
    if ((cp < 0x20 && !(multiline && space)) || cp == 0x7F || cp == 0xFFFE || cp == 0xFFFF) {
      throw EncodingError("contains a control character", std::string(text));
    }
    i += n;
  }
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\r': out += "&#13;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string percent_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : text) {
    const bool unreserved = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                            (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_' ||
                            c == '~';
    if (unreserved) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    }
  }
  return out;
}

std::string class_iri(std::string_view base_iri, std::string_view name) {
  return std::string(base_iri) + percent_encode(name);
}

std::string to_owl_rdfxml(const ConceptHierarchy& h, std::string_view base_iri) {
  for (auto id : h.ids()) {
    const auto& c = h.concept_at(id);
    check_encodable(c.canonical_name, false);
    for (const auto& s : c.synonym_names) check_encodable(s, false);
    if (c.description) check_encodable(*c.description, true);
  }
  check_encodable(base_iri, false);

  std::string ontology_iri(base_iri);
  while (!ontology_iri.empty() && (ontology_iri.back() == '#' || ontology_iri.back() == '/')) {
    ontology_iri.pop_back();
  }

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<rdf:RDF xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"\n"
      << "         xmlns:rdfs=\"http://www.w3.org/2000/01/rdf-schema#\"\n"
      << "         xmlns:owl=\"http://www.w3.org/2002/07/owl#\">\n"
      << "  <owl:Ontology rdf:about=\"" << xml_escape(ontology_iri) << "\"/>\n";
  for (auto id : h.ids()) {
    const auto& c = h.concept_at(id);
    const auto iri = xml_escape(class_iri(base_iri, c.canonical_name));
    out << "  <owl:Class rdf:about=\"" << iri << "\">\n"
        << "    <rdfs:label>" << xml_escape(c.canonical_name) << "</rdfs:label>\n";
    if (c.description) {
      out << "    <rdfs:comment>" << xml_escape(*c.description) << "</rdfs:comment>\n";
    }
    for (auto p : h.parents(id)) {
      out << "    <rdfs:subClassOf rdf:resource=\""
          << xml_escape(class_iri(base_iri, h.name_of(p))) << "\"/>\n";
    }
    out << "  </owl:Class>\n";
    for (const auto& s : c.synonym_names) {
      out << "  <owl:Class rdf:about=\"" << xml_escape(class_iri(base_iri, s)) << "\">\n"
          << "    <rdfs:label>" << xml_escape(s) << "</rdfs:label>\n"
          << "    <owl:equivalentClass rdf:resource=\"" << iri << "\"/>\n"
          << "  </owl:Class>\n";
    }
  }
  out << "</rdf:RDF>\n";
  return out.str();
}

std::string to_dot(const ConceptHierarchy& h) {
  std::ostringstream out;
  out << "digraph hierarchy {\n"
      << "  rankdir=TB;\n"
      << "  node [shape=ellipse];\n";
  for (auto id : h.ids()) {
    out << "  n" << id.value << " [label=\"" << dot_escape(h.name_of(id)) << "\"];\n";
  }
  for (auto id : h.ids()) {
    for (auto child : h.children(id)) {
      out << "  n" << id.value << " -> n" << child.value << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace ontocrawl
