#include <random>

#include <gtest/gtest.h>

#include "adult_actor_snippet.hpp"
#include "fixtures.hpp"
#include "vidgraph/correlation_xml.hpp"

using namespace vidgraph;

namespace {

ConceptLexicon adult_actor_lexicon() {
  return ConceptLexicon(
      {{1, "Actor"}, {2, "Adult"}, {75, "Male_Person"}, {90, "Person"}, {97, "Reporters"}, {106, "Single_Person"}});
}

}  // namespace

TEST(ParseCorrelationXml, AdultActorSnippet) {
  auto doc = parse_correlation_xml(kAdultActorSnippet);
  ASSERT_EQ(doc.entries.size(), 2u);
  const auto* adult = doc.find("Adult");
  ASSERT_NE(adult, nullptr);
  EXPECT_EQ(adult->id, 2u);
  ASSERT_EQ(adult->sub_concepts.size(), 4u);
  EXPECT_EQ(adult->sub_concepts[0], (SubConceptEntry{75, "Male_Person", 0.5012}));
  EXPECT_EQ(adult->sub_concepts[1], (SubConceptEntry{90, "Person", 1.0}));
  EXPECT_EQ(adult->sub_concepts[2], (SubConceptEntry{97, "Reporters", 0.5335}));
  EXPECT_EQ(adult->sub_concepts[3], (SubConceptEntry{106, "Single_Person", 0.4901}));
  EXPECT_EQ(doc.find("Actor")->sub_concepts.at(0).weight, 1.0);
}

TEST(ParseCorrelationXml, EmptyIndexing) {
  EXPECT_TRUE(parse_correlation_xml("<Indexing></Indexing>").entries.empty());
}

TEST(ParseCorrelationXml, RangeAndStructureErrors) {
  EXPECT_THROW(parse_correlation_xml(R"(<Indexing><Concept ConceptId="1" ConceptName="A">
    <SubConcept ConceptID="2" ConceptName="B" Weight="1,5"/></Concept></Indexing>)"),
               ParseError);
  EXPECT_THROW(parse_correlation_xml("<Other/>"), ParseError);
  EXPECT_THROW(parse_correlation_xml(R"(<Indexing><Concept ConceptId="1" ConceptName="A"><Foo/></Concept></Indexing>)"),
               ParseError);
}

TEST(ParseCorrelationXml, LexiconConsistency) {
  const auto lex = adult_actor_lexicon();
  EXPECT_NO_THROW(parse_correlation_xml(kAdultActorSnippet, &lex));
  ConceptLexicon wrong({{1, "Actor"}, {2, "Grownup"}});
  EXPECT_THROW(parse_correlation_xml(kAdultActorSnippet, &wrong), ParseError);
}

TEST(ExportCorrelationXml, AdultListsPerson) {
  auto lex = adult_actor_lexicon();
  CorrelationMatrix m(lex);
  m.set(2u, 90u, 1.0);
  m.set(2u, 75u, 0.5012);
  m.set(2u, 2u, 1.0);
  auto xml = export_correlation_xml(m, lex, 0.4);
  EXPECT_NE(xml.find("<!DOCTYPE Indexing SYSTEM \"index.dtd\">"), std::string::npos);
  EXPECT_NE(xml.find(R"(<SubConcept ConceptID="90" ConceptName="Person" Weight="1"/>)"), std::string::npos);
  EXPECT_NE(xml.find(R"(Weight="0.5012")"), std::string::npos);
  // no self edge
  EXPECT_EQ(xml.find(R"(ConceptID="2" ConceptName="Adult")"), std::string::npos);
}

TEST(ExportCorrelationXml, NothingQualifies) {
  auto lex = fixtures::abc_lexicon();
  CorrelationMatrix m(lex);
  m.set(1u, 2u, 0.99);
  auto xml = export_correlation_xml(m, lex, 1.0);
  EXPECT_EQ(xml.find("SubConcept"), std::string::npos);
  EXPECT_EQ(parse_correlation_xml(xml).entries.size(), 3u);
}

TEST(ExportCorrelationXml, DeskCorpusAtHalf) {
  auto corpus = fixtures::d1();
  auto xml = export_correlation_xml(correlation_matrix(corpus), corpus.lexicon, 0.5);
  const std::string expected =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<!DOCTYPE Indexing SYSTEM \"index.dtd\">\n"
      "<Indexing>\n"
      "  <Concept ConceptId=\"1\" ConceptName=\"A\">\n"
      "    <SubConcept ConceptID=\"2\" ConceptName=\"B\" Weight=\"0.5\"/>\n"
      "    <SubConcept ConceptID=\"3\" ConceptName=\"C\" Weight=\"0.5\"/>\n"
      "  </Concept>\n"
      "  <Concept ConceptId=\"2\" ConceptName=\"B\">\n"
      "    <SubConcept ConceptID=\"1\" ConceptName=\"A\" Weight=\"0.5\"/>\n"
      "  </Concept>\n"
      "  <Concept ConceptId=\"3\" ConceptName=\"C\">\n"
      "    <SubConcept ConceptID=\"1\" ConceptName=\"A\" Weight=\"1\"/>\n"
      "  </Concept>\n"
      "</Indexing>\n";
  EXPECT_EQ(xml, expected);
}

TEST(ExportCorrelationXml, EscapesNames) {
  ConceptLexicon lex({{1, "Rock&Roll"}, {2, "\"Quoted\""}});
  CorrelationMatrix m(lex);
  m.set(1u, 2u, 0.25);
  auto doc = parse_correlation_xml(export_correlation_xml(m, lex, 0.0));
  EXPECT_EQ(doc.entries[0].name, "Rock&Roll");
  EXPECT_EQ(doc.entries[0].sub_concepts[0].name, "\"Quoted\"");
}

TEST(CorrelationXmlProperties, RoundTripToFourDecimals) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    ConceptLexicon lex;
    const int k = 1 + trial % 7;
    for (int c = 1; c <= k; ++c) lex.add(static_cast<ConceptId>(c * 3), "c" + std::to_string(c));
    CorrelationMatrix m(lex);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) m.set(i, j, i == j ? 1.0 : w(rng));
    const auto xml = export_correlation_xml(m, lex, 0.0);
    EXPECT_EQ(xml, export_correlation_xml(m, lex, 0.0));
    auto back = to_correlation_matrix(parse_correlation_xml(xml, &lex), lex);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j)
        if (i != j) EXPECT_NEAR(back.at(i, j), m.at(i, j), 0.5e-4 + 1e-12);
  }
}
