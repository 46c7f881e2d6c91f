#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "doa/mask.hpp"
#include "doa/pnm.hpp"
#include "doa/proposals.hpp"

namespace doa {

struct Displacement {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

struct MatchResult {
  BBox matched_box;
  Displacement displacement;
  /// Mean absolute intensity difference over the block.
  double cost = 0.0;
  std::uint64_t sad = 0;
};

struct ConsistencyVerdict {
  bool consistent = false;
  /// per_frame_iou[j-1] is the best box IoU in frame t-j.
  std::vector<double> per_frame_iou;
};

/// One previous frame with its (score-filtered) proposals, nearest first.
struct HistoryEntry {
  const GrayFrame& frame;
  const FrameProposals& proposals;
};

inline constexpr int kSearchGrowthPerFrame = 20;
inline constexpr int kDefaultHistoryFrames = 3;
inline constexpr double kDefaultConsistencyIou = 0.7;

/// Grows `b` by 20*k_back pixels on every side, clamped to the frame.
BBox enlarge_box(const BBox& b, int k_back, int width, int height);

/// Exhaustive integer-displacement search of the query block over every
/// placement inside `window`. Cost ties go to the smaller dx^2+dy^2, then to
/// the earlier placement in row-major order.
MatchResult block_match(const BBox& query_box, const GrayFrame& query_frame,
                        const GrayFrame& target_frame, const BBox& window);

/// Matches det.box from `current` into each history frame t-j within
/// enlarge_box(det.box, j) and scores the placement against that frame's
/// proposal boxes. Consistent iff every frame's best IoU is >= min_iou.
ConsistencyVerdict check_consistency(const InstanceProposal& det,
                                     std::span<const HistoryEntry> history,
                                     const GrayFrame& current, double min_iou);

}  // namespace doa
