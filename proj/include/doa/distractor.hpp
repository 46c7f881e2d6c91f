#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "doa/flow.hpp"
#include "doa/mask.hpp"
#include "doa/proposals.hpp"
#include "doa/tracklet.hpp"

namespace doa {

/// Per-pixel training label. Values double as the label-map PGM codes.
enum class Label : std::uint8_t { unlabeled = 0, negative = 64, hard_negative = 128, positive = 255 };

enum class AdaptMode { adapt, one_shot };

std::string_view to_string(AdaptMode mode);
AdaptMode adapt_mode_from_string(std::string_view s);

class LabelMap {
 public:
  LabelMap(int width, int height, AdaptMode mode = AdaptMode::adapt);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  AdaptMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return labels_.size(); }

  Label operator[](std::size_t i) const noexcept { return labels_[i]; }
  Label at(int x, int y) const noexcept {
    return labels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  void set(std::size_t i, Label l) noexcept { labels_[i] = l; }

  /// Pixels carrying `l`, as a mask.
  BinaryMask region(Label l) const;
  std::size_t count(Label l) const noexcept;

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_;
  int height_;
  AdaptMode mode_;
  std::vector<Label> labels_;
};

struct SelectionConfig {
  double motion_overlap_max = 0.2;  // T1: hard negatives must stay below this
  double consistency_iou_min = kDefaultConsistencyIou;  // T2
  int history_frames = kDefaultHistoryFrames;           // k
  double score_min = kDefaultScoreMin;
  int erosion_radius = 5;
  /// Unset: round(0.15 * frame diagonal).
  std::optional<double> negative_distance;
  double pseudo_gt_threshold = 0.5;  // T

  double negative_distance_for(int width, int height) const;
  /// Throws ConfigError on out-of-range values.
  void validate() const;

  friend bool operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

struct HardNegativeSelection {
  BinaryMask mask;
  /// Positions in the proposal list that were kept.
  std::vector<int> selected;
};

/// Union of proposals that are tracklet-consistent and mostly static:
/// overlap_ratio(proposal, motion) < T1. `verdicts` aligns with fp.proposals.
HardNegativeSelection select_hard_negatives(const FrameProposals& fp, const MotionMask& motion,
                                            std::span<const ConsistencyVerdict> verdicts,
                                            const SelectionConfig& cfg);

/// Pixels farther than `distance` from every positive. Empty when `pos` is.
BinaryMask select_negatives(const BinaryMask& pos, double distance);

struct PositiveSelection {
  BinaryMask mask;
  AdaptMode mode = AdaptMode::adapt;
};

/// motion & erode(prev_pred); an empty result switches the frame to one_shot.
PositiveSelection select_positives(const BinaryMask& prev_pred, const MotionMask& motion,
                                   int erosion_radius);

/// Priority positive > hard_negative > negative > unlabeled. A one_shot map
/// is entirely unlabeled.
LabelMap assemble_labels(const BinaryMask& pos, const BinaryMask& neg, const BinaryMask& hardneg,
                         AdaptMode mode);

/// PGM with the Label codes, plus a JSON sidecar {"mode": ...}.
void write_label_map(const LabelMap& labels, const std::filesystem::path& pgm_path,
                     const std::filesystem::path& sidecar_path);
LabelMap read_label_map(const std::filesystem::path& pgm_path,
                        const std::filesystem::path& sidecar_path);

}  // namespace doa
