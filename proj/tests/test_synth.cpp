#include <gtest/gtest.h>

#include "doa/error.hpp"
#include "doa/synth.hpp"
#include "oracles.hpp"

namespace {

using namespace doa::synth;

SceneSpec small_scene(int vx, int vy) {
  SceneSpec s;
  s.width = 64;
  s.height = 48;
  s.n_frames = 4;
  s.seed = 5;
  s.target = {Shape::ellipse, 10, 10, 14, 12, vx, vy, false, 1, true, 99};
  s.distractors.push_back({Shape::rect, 40, 30, 10, 10, 0, 0, true, 3, false, 7});
  return s;
}

TEST(Synth, ZeroVelocityGivesZeroFlow) {
  const SceneRenderer r(small_scene(0, 0));
  for (int t = 0; t < 3; ++t) {
    for (float v : r.flow(t).data()) ASSERT_EQ(v, 0.0f);
  }
}

TEST(Synth, AnalyticFlowOnTargetPixels) {
  const SceneRenderer r(small_scene(3, 0));
  const auto f = r.flow(1);
  const auto target = r.visible_mask(r.target_index(), 1);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      ASSERT_EQ(f.u(x, y), target.at(x, y) ? 3.0f : 0.0f);
      ASSERT_EQ(f.v(x, y), 0.0f);
    }
}

TEST(Synth, WarpingByFlowReproducesNextFrameOnObjects) {
  const SceneRenderer r(small_scene(2, -1));
  for (int t = 0; t + 1 < 4; ++t) {
    const auto a = r.frame(t), b = r.frame(t + 1);
    const auto f = r.flow(t);
    const auto obj = r.visible_mask(r.target_index(), t);
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 64; ++x) {
        if (!obj.at(x, y)) continue;
        const int nx = x + static_cast<int>(f.u(x, y)), ny = y + static_cast<int>(f.v(x, y));
        ASSERT_EQ(b.at(nx, ny), a.at(x, y)) << "t=" << t << " (" << x << "," << y << ")";
      }
  }
}

TEST(Synth, OcclusionOrder) {
  SceneSpec s = small_scene(0, 0);
  s.distractors[0] = {Shape::rect, 12, 12, 10, 10, 0, 0, true, 1, true, 3};
  const SceneRenderer r(s);
  const auto hidden = r.visible_mask(0, 0);
  EXPECT_EQ(doa::intersection_count(hidden, r.shape_mask(r.target_index(), 0)), 0u);
  EXPECT_LT(hidden.count(), r.shape_mask(0, 0).count());
}

TEST(Synth, ValidationRejectsObjectsLeavingFrame) {
  SceneSpec s = small_scene(20, 0);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_THROW(scene_from_json(scene_to_json(s)), doa::FormatError);
}

TEST(Synth, SceneJsonRoundTrip) {
  const SceneSpec s = standard_distractor_scene(3);
  EXPECT_EQ(scene_to_json(scene_from_json(scene_to_json(s))), scene_to_json(s));
}

TEST(Synth, StandardSceneShape) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SceneSpec s = standard_distractor_scene(seed);
    EXPECT_NO_THROW(s.validate());
    EXPECT_GE(s.distractors.size(), 2u) << "seed " << seed;
    EXPECT_NE(s.target.vx, 0);
  }
}

TEST(Synth, GenerateIsDeterministic) {
  const auto a = oracle::scratch_dir("synth_a"), b = oracle::scratch_dir("synth_b");
  const SceneSpec s = standard_distractor_scene(11);
  const Manifest ma = generate(s, a);
  generate(s, b);
  EXPECT_EQ(oracle::tree_hash(a), oracle::tree_hash(b));
  EXPECT_EQ(manifest_from_json(oracle::slurp(a / "manifest.json")).frames.size(), ma.frames.size());
  for (const char* sub : {"frames/00000.pgm", "flow/00008.flo", "proposals/00009.jsonl", "gt/00009.pgm"}) {
    EXPECT_TRUE(std::filesystem::exists(a / sub)) << sub;
  }
  EXPECT_FALSE(std::filesystem::exists(a / "flow/00009.flo"));
  // Every static distractor is planted in every frame of the standard scene.
  for (const auto& f : ma.frames) EXPECT_EQ(f.planted_hard_negatives.size(), s.distractors.size());
}

TEST(ScoreSelection, Examples) {
  Manifest m;
  m.n_frames = 3;
  m.frames = {{0, {"target", "distractor_0"}, {"distractor_0"}},
              {1, {"distractor_0", "target", "false_positive"}, {"distractor_0"}},
              {2, {"target", "distractor_0"}, {"distractor_0"}}};
  const auto perfect = score_selection(m, {{1, {0}}, {2, {1}}});
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  const auto none = score_selection(m, {});
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.false_negatives, 2u);
  const auto wrong = score_selection(m, {{1, {0, 1, 2}}, {2, {1}}});
  EXPECT_EQ(wrong.true_positives, 2u);
  EXPECT_EQ(wrong.false_positives, 2u);
  EXPECT_EQ(wrong.precision, 0.5);
}

}  // namespace
