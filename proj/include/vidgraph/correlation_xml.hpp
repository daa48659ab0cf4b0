#pragma once

/// \file correlation_xml.hpp
/// The `Indexing` correlation document: one Concept element per concept with
/// SubConcept children carrying Cd weights.
///
///   <?xml version="1.0" encoding="UTF-8"?>
///   <!DOCTYPE Indexing SYSTEM "index.dtd">
///   <Indexing>
///     <Concept ConceptId="2" ConceptName="Adult">
///       <SubConcept ConceptID="90" ConceptName="Person" Weight="1"/>
///     </Concept>
///   </Indexing>
///
/// Input weights may use a comma decimal separator ("0,5012"); output always
/// uses a dot and at most four fractional digits.

#include <string>
#include <string_view>
#include <vector>

#include "vidgraph/corpus.hpp"
#include "vidgraph/detail/text.hpp"
#include "vidgraph/error.hpp"
#include "vidgraph/ingest.hpp"
#include "vidgraph/semantics.hpp"

namespace vidgraph {

struct SubConceptEntry {
  ConceptId id{};
  std::string name;
  double weight{};

  friend bool operator==(const SubConceptEntry&, const SubConceptEntry&) = default;
};

struct ConceptEntry {
  ConceptId id{};
  std::string name;
  std::vector<SubConceptEntry> sub_concepts;

  friend bool operator==(const ConceptEntry&, const ConceptEntry&) = default;
};

struct CorrelationDocument {
  std::vector<ConceptEntry> entries;

  const ConceptEntry* find(std::string_view name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

/// Serializes every concept in ascending id order, listing targets with
/// weight >= threshold, excluding self-edges. Output is byte-deterministic.
inline std::string export_correlation_xml(const CorrelationMatrix& matrix, const ConceptLexicon& lexicon,
                                          double threshold) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!DOCTYPE Indexing SYSTEM \"index.dtd\">\n";
  out += "<Indexing>\n";
  for (const auto& src : lexicon) {
    out += "  <Concept ConceptId=\"" + std::to_string(src.id) + "\" ConceptName=\"" + detail::xml_escape(src.name) +
           "\">\n";
    for (const auto& dst : lexicon) {
      if (dst.id == src.id) continue;
      const double w = matrix(src.id, dst.id);
      if (w < threshold) continue;
      out += "    <SubConcept ConceptID=\"" + std::to_string(dst.id) + "\" ConceptName=\"" +
             detail::xml_escape(dst.name) + "\" Weight=\"" + detail::format_decimal(w, 4) + "\"/>\n";
    }
    out += "  </Concept>\n";
  }
  out += "</Indexing>\n";
  return out;
}

/// Parses an `Indexing` document. When `lexicon` is given, every id/name pair
/// must match it.
inline CorrelationDocument parse_correlation_xml(std::string_view text, const ConceptLexicon* lexicon = nullptr) {
  auto tree = detail::read_xml_tree(text);
  auto root = tree.get_child_optional("Indexing");
  if (!root || tree.size() != 1) throw ParseError("expected a single Indexing root element");

  auto check_pair = [&](ConceptId id, const std::string& name) {
    if (!lexicon) return;
    const auto* c = lexicon->find(id);
    if (!c) throw ParseError("concept id " + std::to_string(id) + " not in lexicon");
    if (c->name != name)
      throw ParseError("concept " + std::to_string(id) + " is '" + c->name + "' in lexicon, not '" + name + "'");
  };
  auto read_id = [](const detail::pt::ptree& node, const char* attr_name) {
    auto text = detail::attr(node, attr_name);
    if (!text) throw ParseError(std::string("missing ") + attr_name + " attribute");
    auto id = detail::parse_int<ConceptId>(*text);
    if (!id || *id == 0) throw ParseError(std::string("invalid ") + attr_name + " '" + *text + "'");
    return *id;
  };

  CorrelationDocument doc;
  for (const auto& [key, concept_node] : *root) {
    if (key == "<xmlattr>") continue;
    if (key != "Concept") throw ParseError("unexpected element <" + key + "> under Indexing");
    ConceptEntry entry;
    entry.id = read_id(concept_node, "ConceptId");
    entry.name = detail::attr(concept_node, "ConceptName").value_or("");
    if (entry.name.empty()) throw ParseError("Concept " + std::to_string(entry.id) + " lacks ConceptName");
    check_pair(entry.id, entry.name);
    for (const auto& [sub_key, sub] : concept_node) {
      if (sub_key == "<xmlattr>") continue;
      if (sub_key != "SubConcept") throw ParseError("unexpected element <" + sub_key + "> under Concept");
      SubConceptEntry s;
      s.id = read_id(sub, "ConceptID");
      s.name = detail::attr(sub, "ConceptName").value_or("");
      if (s.name.empty()) throw ParseError("SubConcept " + std::to_string(s.id) + " lacks ConceptName");
      check_pair(s.id, s.name);
      auto wtext = detail::attr(sub, "Weight");
      if (!wtext) throw ParseError("SubConcept " + s.name + " lacks Weight");
      auto w = detail::parse_decimal(*wtext);
      if (!w) throw ParseError("invalid Weight '" + *wtext + "'");
      if (*w < 0.0 || *w > 1.0) throw ParseError("Weight " + *wtext + " outside [0,1]");
      s.weight = *w;
      entry.sub_concepts.push_back(std::move(s));
    }
    doc.entries.push_back(std::move(entry));
  }
  return doc;
}

/// Rebuilds a correlation matrix from a parsed document. Unlisted pairs are 0;
/// the diagonal is 1 for every listed source concept.
inline CorrelationMatrix to_correlation_matrix(const CorrelationDocument& doc, const ConceptLexicon& lexicon) {
  CorrelationMatrix m(lexicon);
  for (const auto& e : doc.entries) {
    m.set(e.id, e.id, 1.0);
    for (const auto& s : e.sub_concepts) m.set(e.id, s.id, s.weight);
  }
  return m;
}

}  // namespace vidgraph
