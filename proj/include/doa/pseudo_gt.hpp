#pragma once

#include <filesystem>
#include <vector>

#include "doa/flow.hpp"
#include "doa/mask.hpp"
#include "doa/proposals.hpp"

namespace doa {

inline constexpr double kDefaultPseudoGtThreshold = 0.5;

struct PseudoGroundTruth {
  BinaryMask mask;
  /// Positions in the input proposal list, ascending.
  std::vector<int> selected_indices;
  double threshold = kDefaultPseudoGtThreshold;
};

/// Union of every proposal whose fraction of pixels inside the motion mask
/// strictly exceeds `threshold`. Throws NoForegroundFound when none does
/// (including when `fp` is empty), DimensionError on a size mismatch.
PseudoGroundTruth generate_pseudo_gt(const FrameProposals& fp, const MotionMask& motion,
                                     double threshold = kDefaultPseudoGtThreshold);

/// Writes the mask PGM and a JSON sidecar {selected_indices, T}.
void write_pseudo_gt(const PseudoGroundTruth& pgt, const std::filesystem::path& pgm_path,
                     const std::filesystem::path& sidecar_path);

}  // namespace doa
