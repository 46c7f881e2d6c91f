#include <gtest/gtest.h>

#include <cmath>

#include "doa/adaptation.hpp"
#include "doa/error.hpp"
#include "oracles.hpp"

namespace {

using doa::AdaptMode;
using doa::BinaryMask;
using doa::Label;
using doa::LabelMap;
using doa::ProbMap;

// Direct per-pixel sum, one class at a time.
double naive_class_loss(const ProbMap& p, const LabelMap& lm, Label which, bool fg) {
  double sum = 0;
  int n = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (lm[i] != which) continue;
    sum += fg ? -std::log(p[i]) : -std::log(1 - p[i]);
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

TEST(PixelLoss, Examples) {
  const BinaryMask region = doa::mask_from_box(4, 4, {0, 0, 3, 2});
  EXPECT_NEAR(doa::pixel_loss(ProbMap(4, 4, 0.5), region, true).value, std::log(2.0), 1e-15);
  EXPECT_NEAR(doa::pixel_loss(ProbMap(4, 4, 1.0), region, true).value, 0.0, 1e-6);
  const auto empty = doa::pixel_loss(ProbMap(4, 4, 0.3), BinaryMask(4, 4), false);
  EXPECT_TRUE(empty.empty);
  EXPECT_EQ(empty.value, 0.0);

  oracle::Gen gen(41);
  const ProbMap p = oracle::random_probs(gen, 8, 8, 0.0, 1.0);
  const BinaryMask r = gen.mask(8, 8);
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += r[i] ? -std::log(1 - p[i]) : 0.0;
  const double expect = r.none() ? 0.0 : sum / static_cast<double>(r.count());
  EXPECT_NEAR(doa::pixel_loss(p, r, false).value, expect, 1e-12);
}

TEST(ProbMap, ClampsAndRejectsNan) {
  const ProbMap p(2, 1, std::vector<double>{0.0, 1.0});
  EXPECT_EQ(p[0], doa::kProbEpsilon);
  EXPECT_EQ(p[1], 1.0 - doa::kProbEpsilon);
  EXPECT_THROW(ProbMap(1, 1, std::vector<double>{std::nan("")}), std::invalid_argument);
  EXPECT_THROW(ProbMap(2, 2, std::vector<double>{0.5}), std::invalid_argument);
}

TEST(CurrentLoss, MatchesNaiveSum) {
  oracle::Gen gen(43);
  for (int trial = 0; trial < 50; ++trial) {
    const LabelMap lm = oracle::random_labels(gen, 10, 7);
    const ProbMap p = oracle::random_probs(gen, 10, 7);
    const double lambda = gen.real(0, 1);
    const auto b = doa::current_frame_loss(p, lm, lambda);
    const double hn = naive_class_loss(p, lm, Label::hard_negative, false);
    const double n = naive_class_loss(p, lm, Label::negative, false);
    const double pos = naive_class_loss(p, lm, Label::positive, true);
    EXPECT_NEAR(b.hard_negative, hn, 1e-12);
    EXPECT_NEAR(b.negative, n, 1e-12);
    EXPECT_NEAR(b.positive, pos, 1e-12);
    EXPECT_NEAR(b.current, lambda * hn + (1 - lambda) * n + pos, 1e-12);
    EXPECT_EQ(b.n_hard_negative, lm.count(Label::hard_negative));
  }
}

TEST(CurrentLoss, BlendArithmetic) {
  doa::LossBreakdown b;
  b.hard_negative = 1.0;
  b.negative = 2.0;
  b.positive = 0.0;
  b.current = 0.8 * 1.0 + 0.2 * 2.0;
  EXPECT_NEAR(b.current, 1.2, 1e-15);
  doa::LossBreakdown z;
  z.current = 0.0;
  EXPECT_EQ(doa::total_loss(z, 1.0, 0.95), 0.95);
  z.current = 3.0;
  EXPECT_EQ(doa::total_loss(z, 7.0, 1.0), 7.0);
  EXPECT_EQ(doa::total_loss(z, 7.0, 0.0), 3.0);
  EXPECT_THROW(doa::total_loss(z, 7.0, 1.5), std::invalid_argument);
}

TEST(CurrentLoss, EmptyHardNegativesWithZeroLambdaIsBitIdentical) {
  oracle::Gen gen(47);
  BinaryMask pos = gen.mask(12, 12), neg = gen.mask(12, 12);
  neg.subtract(pos);
  const LabelMap lm = doa::assemble_labels(pos, neg, BinaryMask(12, 12), AdaptMode::adapt);
  const ProbMap p = oracle::random_probs(gen, 12, 12);
  const auto b = doa::current_frame_loss(p, lm, 0.0);
  EXPECT_EQ(b.current, b.negative + b.positive);
  EXPECT_EQ(b.n_hard_negative, 0u);
}

TEST(CurrentLoss, RejectsOneShot) {
  const LabelMap shot(4, 4, AdaptMode::one_shot);
  EXPECT_THROW(doa::current_frame_loss(ProbMap(4, 4, 0.5), shot, 0.8), std::invalid_argument);
  EXPECT_THROW(doa::current_frame_loss(ProbMap(4, 4, 0.5), LabelMap(4, 4), 1.2), std::invalid_argument);
  EXPECT_THROW(doa::current_frame_loss(ProbMap(4, 5, 0.5), LabelMap(4, 4), 0.5), doa::DimensionError);
}

TEST(Loss, NonnegativeAndZeroWhenSaturatedCorrect) {
  oracle::Gen gen(53);
  const LabelMap lm = oracle::random_labels(gen, 8, 8);
  std::vector<double> perfect(64);
  for (std::size_t i = 0; i < 64; ++i) perfect[i] = lm[i] == Label::positive ? 1.0 : 0.0;
  const auto b = doa::current_frame_loss(ProbMap(8, 8, perfect), lm, 0.8);
  EXPECT_GE(b.current, 0.0);
  EXPECT_LT(b.current, 1e-6);
  EXPECT_GT(doa::current_frame_loss(ProbMap(8, 8, 0.5), lm, 0.8).current, 0.1);
}

TEST(FirstFrameLoss, ForegroundPlusBackgroundMeans) {
  const BinaryMask pgt = doa::mask_from_box(4, 4, {0, 0, 2, 2});
  EXPECT_NEAR(doa::first_frame_loss(ProbMap(4, 4, 0.5), pgt), 2 * std::log(2.0), 1e-15);
}

TEST(Gradient, SolePositivePixel) {
  LabelMap lm(3, 3);
  lm.set(4, Label::positive);
  const ProbMap p(3, 3, 0.5);
  const BinaryMask pgt = doa::mask_from_box(3, 3, {0, 0, 1, 1});
  const auto g = doa::loss_gradient(p, lm, 0.8, 0.0, {p, pgt});
  EXPECT_NEAR(g.current[4], -2.0, 1e-15);
  EXPECT_EQ(g.current[0], 0.0);
}

TEST(Gradient, MatchesFiniteDifferences) {
  oracle::Gen gen(59);
  for (int trial = 0; trial < 10; ++trial) {
    const LabelMap lm = oracle::random_labels(gen, 8, 8);
    const ProbMap p = oracle::random_probs(gen, 8, 8);
    const ProbMap p_first = oracle::random_probs(gen, 8, 8);
    BinaryMask pgt = gen.mask(8, 8);
    pgt.set(0, 0);
    const double lambda = gen.real(0, 1), alpha = gen.real(0, 1);
    const auto g = doa::loss_gradient(p, lm, lambda, alpha, {p_first, pgt});
    std::vector<double> analytic = g.current;
    analytic.insert(analytic.end(), g.first_frame.begin(), g.first_frame.end());
    const auto numeric = oracle::numeric_gradient(p, lm, lambda, alpha, p_first, pgt);
    EXPECT_LE(oracle::relative_error(analytic, numeric), 1e-5);
  }
}

TEST(Plan, BuildAndRoundTrip) {
  const std::vector<doa::FrameSelectionSummary> frames{
      {1, AdaptMode::adapt, true, "labels/00001.pgm"},
      {2, AdaptMode::adapt, false, "labels/00002.pgm"},
      {3, AdaptMode::one_shot, false, "labels/00003.pgm"},
  };
  const auto plan = doa::build_plan(frames, {}, "pseudo_gt.pgm");
  ASSERT_EQ(plan.frames.size(), 3u);
  EXPECT_EQ(plan.frames[0].lambda, 0.8);
  EXPECT_EQ(plan.frames[1].lambda, 0.0);
  EXPECT_EQ(plan.frames[2].mode, AdaptMode::one_shot);
  EXPECT_TRUE(plan.frames[2].label_map_path.empty());
  for (const auto& r : plan.frames) {
    EXPECT_EQ(r.alpha, 0.95);
    EXPECT_EQ(r.iterations, 15);
    EXPECT_EQ(r.first_frame_sample_prob, 0.95);
  }
  const std::string text = doa::serialize_plan(plan);
  EXPECT_EQ(doa::parse_plan(text), plan);
  EXPECT_EQ(text.find("label_map_path", text.find("\"frame_index\": 3")), std::string::npos);
  EXPECT_THROW(doa::parse_plan("{\"frames\": [{}]}"), doa::FormatError);
}

}  // namespace
