#include "doa/tracklet.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "doa/error.hpp"
#include "doa/simd.hpp"

namespace doa {

BBox enlarge_box(const BBox& b, int k_back, int width, int height) {
  if (k_back < 1) throw std::invalid_argument("enlarge_box: k_back must be >= 1");
  const int grow = kSearchGrowthPerFrame * k_back;
  const int x0 = std::max(0, b.x - grow);
  const int y0 = std::max(0, b.y - grow);
  const int x1 = std::min(width, b.right() + grow);
  const int y1 = std::min(height, b.bottom() + grow);
  return BBox{x0, y0, x1 - x0, y1 - y0};
}

MatchResult block_match(const BBox& query_box, const GrayFrame& query_frame,
                        const GrayFrame& target_frame, const BBox& window) {
  if (!query_box.within(query_frame.width, query_frame.height)) {
    throw std::invalid_argument("block_match: query box outside query frame");
  }
  if (!window.within(target_frame.width, target_frame.height)) {
    throw std::invalid_argument("block_match: search window outside target frame");
  }
  if (window.w < query_box.w || window.h < query_box.h) {
    throw std::invalid_argument("block_match: search window smaller than block (" +
                                std::to_string(window.w) + "x" + std::to_string(window.h) + " < " +
                                std::to_string(query_box.w) + "x" + std::to_string(query_box.h) +
                                ")");
  }

  const auto sad_row = simd::active().sad;
  const auto bw = static_cast<std::size_t>(query_box.w);
  std::uint64_t best_sad = std::numeric_limits<std::uint64_t>::max();
  long long best_r2 = std::numeric_limits<long long>::max();
  int best_x = window.x, best_y = window.y;

  for (int py = window.y; py + query_box.h <= window.bottom(); ++py) {
    for (int px = window.x; px + query_box.w <= window.right(); ++px) {
      const long long dx = px - query_box.x, dy = py - query_box.y;
      const long long r2 = dx * dx + dy * dy;
      // Once the partial sum exceeds the incumbent this placement cannot win,
      // and an equal total only wins with a shorter displacement.
      std::uint64_t sad = 0;
      bool pruned = false;
      for (int row = 0; row < query_box.h; ++row) {
        sad += sad_row(query_frame.row(query_box.y + row) + query_box.x,
                       target_frame.row(py + row) + px, bw);
        if (sad > best_sad || (sad == best_sad && r2 >= best_r2)) {
          pruned = true;
          break;
        }
      }
      if (pruned) continue;
      best_sad = sad;
      best_r2 = r2;
      best_x = px;
      best_y = py;
    }
  }

  MatchResult res;
  res.matched_box = BBox{best_x, best_y, query_box.w, query_box.h};
  res.displacement = Displacement{best_x - query_box.x, best_y - query_box.y};
  res.sad = best_sad;
  res.cost = static_cast<double>(best_sad) / static_cast<double>(query_box.area());
  return res;
}

ConsistencyVerdict check_consistency(const InstanceProposal& det,
                                     std::span<const HistoryEntry> history,
                                     const GrayFrame& current, double min_iou) {
  if (history.empty()) throw std::invalid_argument("check_consistency: empty history");
  if (!(min_iou > 0.0 && min_iou <= 1.0)) {
    throw std::invalid_argument("check_consistency: IoU floor must lie in (0, 1]");
  }
  ConsistencyVerdict verdict;
  verdict.per_frame_iou.reserve(history.size());
  for (std::size_t j = 0; j < history.size(); ++j) {
    const GrayFrame& prev = history[j].frame;
    if (prev.width != current.width || prev.height != current.height) {
      throw DimensionError("check_consistency: history frame size differs from current frame");
    }
    const BBox window = enlarge_box(det.box, static_cast<int>(j) + 1, current.width, current.height);
    const MatchResult match = block_match(det.box, current, prev, window);
    double best = 0.0;
    for (const auto& p : history[j].proposals.proposals) {
      best = std::max(best, iou(match.matched_box, p.box));
    }
    verdict.per_frame_iou.push_back(best);
  }
  const double worst = *std::min_element(verdict.per_frame_iou.begin(), verdict.per_frame_iou.end());
  verdict.consistent = worst >= min_iou;
  return verdict;
}

}  // namespace doa
