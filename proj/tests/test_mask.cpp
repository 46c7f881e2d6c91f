#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "doa/error.hpp"
#include "doa/mask.hpp"
#include "oracles.hpp"

namespace {

using doa::BBox;
using doa::BinaryMask;

BinaryMask pixels(int w, int h, std::initializer_list<std::pair<int, int>> pts) {
  BinaryMask m(w, h);
  for (auto [x, y] : pts) m.set(x, y);
  return m;
}

TEST(Mask, ConstructionValidates) {
  EXPECT_THROW(BinaryMask(0, 3), std::invalid_argument);
  EXPECT_THROW(BinaryMask(2, 2, {0, 1, 0}), std::invalid_argument);
  EXPECT_THROW(BinaryMask(2, 2, {0, 1, 2, 0}), std::invalid_argument);
  EXPECT_THROW(doa::make_bbox(0, 0, 0, 1), std::invalid_argument);
  EXPECT_EQ(BinaryMask(2, 2, {0, 1, 1, 0}).count(), 2u);
}

TEST(Mask, IouExamples) {
  const BinaryMask a = doa::mask_from_box(8, 8, {1, 1, 3, 2});
  EXPECT_DOUBLE_EQ(doa::iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(doa::iou(a, doa::mask_from_box(8, 8, {5, 5, 2, 2})), 0.0);
  EXPECT_DOUBLE_EQ(doa::iou(BinaryMask(4, 4), BinaryMask(4, 4)), 0.0);
  // 2x2 boxes sharing a 1x2 strip.
  EXPECT_DOUBLE_EQ(doa::iou(BBox{0, 0, 2, 2}, BBox{1, 0, 2, 2}), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(doa::iou(doa::mask_from_box(4, 4, {0, 0, 2, 2}), doa::mask_from_box(4, 4, {1, 0, 2, 2})),
                   1.0 / 3.0);
  EXPECT_THROW(doa::iou(BinaryMask(3, 3), BinaryMask(3, 4)), doa::DimensionError);
}

TEST(Mask, IouIsSymmetricAndBounded) {
  oracle::Gen gen(3);
  for (int i = 0; i < 300; ++i) {
    const int w = gen.uniform(1, 12), h = gen.uniform(1, 12);
    const BinaryMask a = gen.mask(w, h), b = gen.mask(w, h);
    const double ab = doa::iou(a, b);
    EXPECT_EQ(ab, doa::iou(b, a));
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    if (!a.none()) {
      EXPECT_EQ(doa::iou(a, a), 1.0);
    }
  }
}

TEST(Mask, OverlapRatio) {
  BinaryMask inner = doa::mask_from_box(10, 1, {0, 0, 10, 1});
  BinaryMask cover = doa::mask_from_box(10, 1, {0, 0, 6, 1});
  EXPECT_DOUBLE_EQ(doa::overlap_ratio(inner, cover), 0.6);
  EXPECT_DOUBLE_EQ(doa::overlap_ratio(cover, inner), 1.0);
  EXPECT_DOUBLE_EQ(doa::overlap_ratio(cover, BinaryMask(10, 1)), 0.0);
  EXPECT_THROW(doa::overlap_ratio(BinaryMask(10, 1), cover), std::invalid_argument);
}

TEST(Mask, UnionAll) {
  const BinaryMask left = doa::mask_from_box(6, 4, {0, 0, 3, 4});
  const BinaryMask right = doa::mask_from_box(6, 4, {3, 0, 3, 4});
  const std::vector<BinaryMask> halves{left, right};
  EXPECT_EQ(doa::union_all(halves).count(), 24u);
  const std::vector<BinaryMask> one{left, BinaryMask(6, 4)};
  EXPECT_EQ(doa::union_all(one), left);
  const std::vector<BinaryMask> swapped{right, left};
  EXPECT_EQ(doa::union_all(swapped), doa::union_all(halves));
  EXPECT_THROW(doa::union_all({}), std::invalid_argument);
  const std::vector<BinaryMask> mixed{left, BinaryMask(5, 4)};
  EXPECT_THROW(doa::union_all(mixed), doa::DimensionError);
}

TEST(Mask, SetAlgebra) {
  BinaryMask a = doa::mask_from_box(5, 5, {0, 0, 3, 3});
  const BinaryMask b = doa::mask_from_box(5, 5, {2, 2, 3, 3});
  EXPECT_EQ(doa::intersection_count(a, b), 1u);
  EXPECT_EQ((a | b).count(), 17u);
  EXPECT_EQ((a & b).count(), 1u);
  EXPECT_TRUE(doa::is_subset(a & b, a));
  EXPECT_FALSE(doa::is_subset(a, b));
  a.subtract(b);
  EXPECT_EQ(a.count(), 8u);
}

TEST(Morphology, Examples) {
  const BinaryMask square = doa::mask_from_box(9, 9, {2, 2, 5, 5});
  EXPECT_EQ(doa::erode(square, 0), square);
  EXPECT_EQ(doa::erode(square, 1), doa::mask_from_box(9, 9, {3, 3, 3, 3}));
  EXPECT_TRUE(doa::erode(pixels(5, 5, {{2, 2}}), 1).none());
  EXPECT_EQ(doa::dilate(square, 0), square);
  EXPECT_TRUE(doa::dilate(BinaryMask(7, 7), 3).none());
  EXPECT_EQ(doa::dilate(pixels(5, 5, {{2, 2}}), 1), pixels(5, 5, {{2, 2}, {1, 2}, {3, 2}, {2, 1}, {2, 3}}));
  EXPECT_THROW(doa::erode(square, -1), std::invalid_argument);
}

TEST(Morphology, FrameBorderCountsAsBackground) {
  const BinaryMask full = doa::mask_from_box(6, 6, {0, 0, 6, 6});
  EXPECT_EQ(doa::erode(full, 1), doa::mask_from_box(6, 6, {1, 1, 4, 4}));
}

TEST(Morphology, MatchesBruteForce) {
  oracle::Gen gen(5);
  for (int i = 0; i < 150; ++i) {
    const int w = gen.uniform(1, 24), h = gen.uniform(1, 24), r = gen.uniform(0, 6);
    const BinaryMask m = gen.mask(w, h);
    const BinaryMask er = doa::erode(m, r), di = doa::dilate(m, r);
    ASSERT_EQ(er, oracle::erode(m, r)) << w << "x" << h << " r=" << r;
    ASSERT_EQ(di, oracle::dilate(m, r)) << w << "x" << h << " r=" << r;
    EXPECT_TRUE(doa::is_subset(er, m));
    EXPECT_TRUE(doa::is_subset(m, di));
  }
}

TEST(DistanceTransform, Examples) {
  const auto d = doa::distance_transform(pixels(5, 6, {{0, 0}}));
  EXPECT_EQ(d.at(3, 4), 5.0);
  EXPECT_EQ(d.at(0, 0), 0.0);
  const auto empty = doa::distance_transform(BinaryMask(4, 3));
  for (double v : empty.values) EXPECT_GT(v, 4 + 3);
}

TEST(DistanceTransform, ExactAgainstBruteForce) {
  oracle::Gen gen(7);
  for (int i = 0; i < 120; ++i) {
    const int w = gen.uniform(1, 40), h = gen.uniform(1, 40);
    const BinaryMask m = gen.mask(w, h);
    ASSERT_EQ(doa::squared_distance_transform(m), oracle::squared_distances(m)) << w << "x" << h;
  }
}

TEST(DistanceTransform, SquareRootOfSquared) {
  const BinaryMask m = pixels(7, 7, {{1, 1}, {5, 2}});
  const auto sq = doa::squared_distance_transform(m);
  const auto d = doa::distance_transform(m);
  for (std::size_t i = 0; i < sq.size(); ++i) EXPECT_EQ(d.values[i], std::sqrt(sq[i]));
}

TEST(Rle, Examples) {
  EXPECT_EQ(doa::rle_encode(BinaryMask(2, 2)), (std::vector<std::uint32_t>{4}));
  EXPECT_EQ(doa::rle_encode(doa::mask_from_box(2, 2, {0, 0, 2, 2})), (std::vector<std::uint32_t>{0, 4}));
  // Column-major: (1,0) is the third pixel in scan order.
  EXPECT_EQ(doa::rle_encode(pixels(2, 2, {{1, 0}})), (std::vector<std::uint32_t>{2, 1, 1}));
  const std::vector<std::uint32_t> bad{3};
  EXPECT_THROW(doa::rle_decode(bad, 2, 2), doa::FormatError);
}

TEST(Rle, RoundTrip) {
  oracle::Gen gen(9);
  for (int i = 0; i < 1000; ++i) {
    const BinaryMask m = gen.mask(32, 32);
    ASSERT_EQ(doa::rle_decode(doa::rle_encode(m), 32, 32), m);
  }
}

TEST(BBoxOf, Examples) {
  EXPECT_EQ(doa::bbox_of(pixels(10, 10, {{3, 7}})), (BBox{3, 7, 1, 1}));
  EXPECT_EQ(doa::bbox_of(doa::mask_from_box(6, 4, {0, 0, 6, 4})), (BBox{0, 0, 6, 4}));
  EXPECT_EQ(doa::bbox_of(pixels(10, 10, {{1, 1}, {4, 2}})), (BBox{1, 1, 4, 2}));
  EXPECT_THROW(doa::bbox_of(BinaryMask(3, 3)), std::invalid_argument);
}

}  // namespace
