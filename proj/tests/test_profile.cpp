#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vidgraph/profile.hpp"

using namespace vidgraph;

namespace {

InteractionEvent click(const std::string& shot, Timestamp t = 100) { return {"u", shot, EventKind::click, {}, t}; }
InteractionEvent dwell(const std::string& shot, double s, Timestamp t = 200) {
  return {"u", shot, EventKind::dwell, s, t};
}

}  // namespace

TEST(UserWeight, Formula) {
  UserProfile p{"u", {}, {}};
  EXPECT_EQ(user_weight(p, "s1"), 0.0);
  p.stats["s1"] = {1, 0.0, 0};
  EXPECT_EQ(user_weight(p, "s1"), 0.5);
  p.stats["s2"] = {3, 120.0, 0};
  EXPECT_EQ(user_weight(p, "s2"), 5.0 / 6.0);
}

TEST(UserWeight, StrictlyIncreasingInBothIndicators) {
  UserProfile p{"u", {}, {}};
  double prev = 0.0;
  for (int i = 1; i < 20; ++i) {
    p.stats["s"] = {static_cast<std::uint64_t>(i), 0.0, 0};
    EXPECT_GT(user_weight(p, "s"), prev);
    prev = user_weight(p, "s");
    EXPECT_LT(prev, 1.0);
  }
  p.stats["s"].dwell_seconds = 1.0;
  EXPECT_GT(user_weight(p, "s"), prev);
}

TEST(RecordEvent, ClickThenDwellAccumulate) {
  auto g = fixtures::chain_graph();
  UserProfile p{"u", {}, {}};
  p = record_event(p, click("n1"), g);
  EXPECT_EQ(p.stats.at("n1"), (ShotStats{1, 0.0, 100}));
  p = record_event(p, dwell("n1", 30.0), g);
  EXPECT_EQ(p.stats.at("n1"), (ShotStats{1, 30.0, 200}));
  EXPECT_EQ(p.stats.size(), 1u);
}

TEST(RecordEvent, UnknownShotAndInvalidEvents) {
  auto g = fixtures::chain_graph();
  UserProfile p{"u", {}, {}};
  EXPECT_THROW(record_event(p, click("nope"), g), NotFoundError);
  EXPECT_THROW(record_event(p, dwell("n1", 0.0), g), DomainError);
  InteractionEvent bad = click("n1");
  bad.dwell_seconds = 3.0;
  EXPECT_THROW(record_event(p, bad, g), DomainError);
}

TEST(EffectiveWeight, BlendExamples) {
  EXPECT_DOUBLE_EQ(effective_weight(0.5, 0.8, 0.2, 0.3), 0.7 * 0.5 + 0.3 * 0.8);
  EXPECT_EQ(effective_weight(0.37, 1.0, 1.0, 1.0), 1.0);
  EXPECT_EQ(effective_weight(0.37, 0.0, 0.0, 0.6), 0.37);
  EXPECT_EQ(effective_weight(0.37, 0.9, 0.1, 0.0), 0.37);
}

TEST(EffectiveWeight, EmptyProfileLeavesEveryEdgeUnchanged) {
  auto g = fixtures::chain_graph();
  UserProfile empty{"u", {}, {}};
  for (double lambda : {0.0, 0.3, 1.0})
    for (const auto& e : g.edges()) EXPECT_EQ(effective_weight(e, empty, lambda), e.base_weight);
}

TEST(EffectiveWeight, NonDecreasingInUserWeight) {
  for (double base = 0.0; base <= 1.0; base += 0.125)
    for (double lambda = 0.0; lambda <= 1.0; lambda += 0.25) {
      double prev = effective_weight(base, 0.0, 0.0, lambda);
      for (double wu = 0.05; wu < 1.0; wu += 0.05) {
        const double w = effective_weight(base, wu, 0.0, lambda);
        EXPECT_GE(w, prev);
        EXPECT_LE(w, 1.0);
        prev = w;
      }
    }
}
