#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vidgraph/ingest.hpp"

using namespace vidgraph;

namespace {

const char* kSampleRanking = R"(<?xml version="1.0" encoding="UTF-8"?>
<videoFeatureExtractionResults>
<videoFeatureExtractionFeatureResult fNum="130">
<item seqNum="1" shotId="shot10028_1"/>
<item seqNum="2" shotId="shot10028_2"/>
<item seqNum="3" shotId="shot10028_3"/>
<item seqNum="4" shotId="shot10028_4"/>
<item seqNum="5" shotId="shot10028_5"/>
<item seqNum="6" shotId="shot10028_6"/>
<item seqNum="7" shotId="shot10028_7"/>
<item seqNum="8" shotId="shot10028_8"/>
<item seqNum="9" shotId="shot4781_32"/>
</videoFeatureExtractionFeatureResult>
</videoFeatureExtractionResults>
)";

ConceptLexicon lexicon_with_130() {
  ConceptLexicon lex;
  lex.add(2, "Adult");
  lex.add(130, "Walking_Running");
  return lex;
}

Manifest manifest_of(std::initializer_list<std::string> shots) {
  Manifest m;
  for (const auto& s : shots) m[s] = {"v", s + ".jpg"};
  return m;
}

}  // namespace

TEST(ParseLexicon, LeadingZerosAndHeader) {
  auto lex = parse_lexicon("TV10_ID LSCOM_Name\n001 Actor\n002 Adult\n003 Airplane\n");
  ASSERT_EQ(lex.size(), 3u);
  EXPECT_EQ(lex.find(1)->name, "Actor");
  EXPECT_EQ(lex.find(2)->name, "Adult");
  EXPECT_EQ(lex.find(3)->name, "Airplane");
}

TEST(ParseLexicon, TabAndCommaSeparated) {
  EXPECT_EQ(parse_lexicon("001\tActor\r\n002\tAdult\n").size(), 2u);
  EXPECT_EQ(parse_lexicon("id,name\n7,Beach\n").find(7)->name, "Beach");
}

TEST(ParseLexicon, EmptyInputGivesEmptyLexicon) { EXPECT_TRUE(parse_lexicon("").empty()); }

TEST(ParseLexicon, DuplicateIdReportsSecondLine) {
  try {
    parse_lexicon("001 Actor\n002 Adult\n002 Airplane\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseLexicon, DuplicateNameAndBadIdAreErrors) {
  EXPECT_THROW(parse_lexicon("1 Actor\n2 Actor\n"), ParseError);
  try {
    parse_lexicon("1 Actor\nx2 Adult\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseRankingXml, SampleRankedListDocument) {
  auto doc = parse_ranking_xml(kSampleRanking, lexicon_with_130());
  EXPECT_EQ(doc.feature_number, 130u);
  ASSERT_EQ(doc.items.size(), 9u);
  EXPECT_EQ(doc.items.front(), (RankedItem{1, "shot10028_1"}));
  EXPECT_EQ(doc.items.back(), (RankedItem{9, "shot4781_32"}));
}

TEST(ParseRankingXml, EmptyItemList) {
  auto doc = parse_ranking_xml(R"(<videoFeatureExtractionFeatureResult fNum="2"></videoFeatureExtractionFeatureResult>)",
                               lexicon_with_130());
  EXPECT_EQ(doc.feature_number, 2u);
  EXPECT_TRUE(doc.items.empty());
}

TEST(ParseRankingXml, NonMonotoneRank) {
  const char* xml = R"(<videoFeatureExtractionFeatureResult fNum="2">
<item seqNum="1" shotId="a"/><item seqNum="3" shotId="b"/></videoFeatureExtractionFeatureResult>)";
  try {
    parse_ranking_xml(xml, lexicon_with_130());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-monotone rank"), std::string::npos);
  }
}

TEST(ParseRankingXml, UnknownFeatureAndMalformedXml) {
  EXPECT_THROW(parse_ranking_xml(R"(<videoFeatureExtractionFeatureResult fNum="5"/>)", lexicon_with_130()),
               ParseError);
  try {
    parse_ranking_xml("<videoFeatureExtractionFeatureResult fNum=\"2\">\n<item seqNum=\"1\"\n", lexicon_with_130());
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0u);
  }
}

TEST(AssembleCorpus, RankPrefixLabelsShots) {
  auto lex = fixtures::abc_lexicon();
  RankingDocument r{2, {{1, "s1"}, {2, "s2"}, {3, "s3"}}};
  auto corpus = assemble_corpus({r}, manifest_of({"s1", "s2", "s3"}), lex, 2);
  ASSERT_EQ(corpus.shots.size(), 3u);
  EXPECT_EQ(corpus.find("s1")->vector.concepts, std::vector<ConceptId>{2});
  EXPECT_EQ(corpus.find("s2")->vector.concepts, std::vector<ConceptId>{2});
  EXPECT_TRUE(corpus.find("s3")->vector.empty());
  EXPECT_TRUE(validate_corpus(corpus).empty());
}

TEST(AssembleCorpus, TopKZeroGivesEmptyVectors) {
  RankingDocument r{2, {{1, "s1"}, {2, "s2"}}};
  auto corpus = assemble_corpus({r}, manifest_of({"s1", "s2"}), fixtures::abc_lexicon(), 0);
  for (const auto& s : corpus.shots) EXPECT_TRUE(s.vector.empty());
}

TEST(AssembleCorpus, MissingManifestShotIsNamed) {
  RankingDocument r{2, {{1, "s1"}, {2, "s9"}}};
  try {
    assemble_corpus({r}, manifest_of({"s1"}), fixtures::abc_lexicon(), 10);
    FAIL();
  } catch (const NotFoundError& e) {
    EXPECT_NE(std::string(e.what()).find("s9"), std::string::npos);
  }
}

TEST(AssembleCorpus, OrderInsensitiveInRankings) {
  std::mt19937_64 rng(7);
  auto lex = fixtures::abc_lexicon();
  auto manifest = manifest_of({"s0", "s1", "s2", "s3", "s4", "s5"});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<RankingDocument> docs;
    for (ConceptId c : {1u, 2u, 3u}) {
      std::vector<std::string> ids{"s0", "s1", "s2", "s3", "s4", "s5"};
      std::shuffle(ids.begin(), ids.end(), rng);
      RankingDocument d{c, {}};
      for (std::uint32_t i = 0; i < 4; ++i) d.items.push_back({i + 1, ids[i]});
      docs.push_back(d);
    }
    auto reference = assemble_corpus(docs, manifest, lex, 3);
    std::shuffle(docs.begin(), docs.end(), rng);
    EXPECT_EQ(assemble_corpus(docs, manifest, lex, 3), reference);
  }
}

TEST(ParseManifest, TwoAndThreeColumns) {
  auto m = parse_manifest("# shot video path\nshot1_1 video1 kf/a.jpg\nshot1_2\tkf/b.png\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m["shot1_1"].video_id, "video1");
  EXPECT_EQ(m["shot1_2"].keyframe_path, "kf/b.png");
  EXPECT_THROW(parse_manifest("a b c d\n"), ParseError);
  EXPECT_THROW(parse_manifest("a x.jpg\na y.jpg\n"), ParseError);
}

TEST(Detections, ThresholdedIngestKeepsScores) {
  ConceptLexicon lex({{2, "Adult"}, {10, "Beach"}});
  auto records = parse_detections("s1 Adult 0.9\ns1 10 0,2\n", lex);
  ASSERT_EQ(records.size(), 2u);
  auto corpus = assemble_corpus_from_detections(records, manifest_of({"s1", "s2"}), lex, 0.5);
  EXPECT_EQ(corpus.find("s1")->vector.concepts, std::vector<ConceptId>{2});
  EXPECT_DOUBLE_EQ(corpus.find("s1")->vector.scores.at(10), 0.2);
  EXPECT_TRUE(corpus.find("s2")->vector.empty());
  EXPECT_THROW(parse_detections("s1 Adult 1.5\n", lex), ParseError);
  EXPECT_THROW(parse_detections("s1 adult 0.5\n", lex), ParseError);
}
