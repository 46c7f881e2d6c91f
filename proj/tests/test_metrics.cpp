#include <gtest/gtest.h>

#include <json.hpp>

#include "doa/error.hpp"
#include "doa/metrics.hpp"
#include "doa/pnm.hpp"
#include "oracles.hpp"

namespace {

using doa::BinaryMask;

TEST(Jaccard, Conventions) {
  EXPECT_EQ(doa::jaccard(BinaryMask(5, 5), BinaryMask(5, 5)), 1.0);
  const BinaryMask a = doa::mask_from_box(5, 5, {0, 0, 2, 2});
  EXPECT_EQ(doa::jaccard(a, BinaryMask(5, 5)), 0.0);
  EXPECT_EQ(doa::jaccard(a, a), 1.0);
  EXPECT_THROW(doa::jaccard(a, BinaryMask(4, 5)), doa::DimensionError);
}

TEST(Boundary, RingOfSquare) {
  const BinaryMask sq = doa::mask_from_box(10, 10, {2, 2, 5, 5});
  EXPECT_EQ(doa::boundary(sq).count(), 16u);
  // Frame-edge pixels are boundary even with no background neighbour inside.
  EXPECT_EQ(doa::boundary(doa::mask_from_box(3, 3, {0, 0, 3, 3})).count(), 8u);
}

TEST(FMeasure, Conventions) {
  const BinaryMask a = doa::mask_from_box(12, 12, {2, 2, 5, 5});
  EXPECT_EQ(doa::f_measure(a, a, 0), 1.0);
  EXPECT_EQ(doa::f_measure(BinaryMask(12, 12), BinaryMask(12, 12), 1), 1.0);
  EXPECT_EQ(doa::f_measure(a, BinaryMask(12, 12), 1), 0.0);
  // Shifted by one pixel: tolerance 1 matches everything.
  EXPECT_EQ(doa::f_measure(a, doa::mask_from_box(12, 12, {3, 2, 5, 5}), 1), 1.0);
  EXPECT_LT(doa::f_measure(a, doa::mask_from_box(12, 12, {3, 2, 5, 5}), 0), 1.0);
}

TEST(Metrics, MatchBruteForce) {
  oracle::Gen gen(61);
  for (int i = 0; i < 200; ++i) {
    const int w = gen.uniform(1, 20), h = gen.uniform(1, 20), tol = gen.uniform(0, 4);
    const BinaryMask p = gen.mask(w, h), g = gen.mask(w, h);
    EXPECT_EQ(doa::jaccard(p, g), oracle::jaccard(p, g));
    EXPECT_NEAR(doa::f_measure(p, g, tol), oracle::f_measure(p, g, tol), 1e-12);
  }
}

TEST(Metrics, DefaultTolerance) {
  EXPECT_EQ(doa::default_boundary_tolerance(854, 480), 8);
  EXPECT_EQ(doa::default_boundary_tolerance(32, 32), 1);
}

TEST(SequenceReport, ExcludesEndpointsByDefault) {
  const BinaryMask full = doa::mask_from_box(6, 6, {0, 0, 6, 6});
  const BinaryMask empty(6, 6);
  const std::vector<BinaryMask> preds{empty, full, full, empty};
  const std::vector<BinaryMask> gts{full, full, full, full};
  const auto rep = doa::sequence_report(preds, gts);
  EXPECT_EQ(rep.j_mean, 1.0);
  EXPECT_EQ(rep.frames.size(), 4u);
  doa::EvalOptions all;
  all.exclude_endpoints = false;
  EXPECT_EQ(doa::sequence_report(preds, gts, all).j_mean, 0.5);
  EXPECT_THROW(doa::sequence_report(std::span(preds).first(2), std::span(gts).first(2)), std::invalid_argument);
  EXPECT_THROW(doa::sequence_report(preds, std::span(gts).first(3)), std::invalid_argument);
}

TEST(SequenceReport, DirectoriesAndJson) {
  const auto root = oracle::scratch_dir("metrics");
  std::filesystem::create_directories(root / "pred");
  std::filesystem::create_directories(root / "gt");
  for (int t = 0; t < 4; ++t) {
    char name[16];
    std::snprintf(name, sizeof name, "%05d.pgm", t);
    const BinaryMask g = doa::mask_from_box(10, 8, {t, 1, 4, 4});
    doa::write_mask_pgm(root / "gt" / name, g);
    doa::write_mask_pgm(root / "pred" / name, t == 2 ? BinaryMask(10, 8) : g);
  }
  const auto rep = doa::evaluate_directories(root / "pred", root / "gt", {}, "toy");
  EXPECT_EQ(rep.j_mean, 0.5);
  const auto doc = nlohmann::json::parse(doa::metrics_json(rep));
  EXPECT_EQ(doc["sequence"], "toy");
  EXPECT_EQ(doc["frames"].size(), 4u);
  EXPECT_EQ(doc["frames"][2]["index"], 2);
  EXPECT_EQ(doc["frames"][2]["j"], 0.0);
  EXPECT_THROW(doa::evaluate_directories(root / "pred", root / "nothing", {}, "x"), doa::FormatError);
}

}  // namespace
