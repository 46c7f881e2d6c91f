#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doa/adaptation.hpp"
#include "doa/distractor.hpp"
#include "doa/flow.hpp"
#include "doa/metrics.hpp"
#include "doa/proposals.hpp"
#include "doa/tracklet.hpp"

namespace doa {

struct EvalConfig {
  bool enabled = true;
  std::optional<int> tol;
  bool exclude_endpoints = true;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

struct PipelineConfig {
  SelectionConfig selection;
  /// Score floor for the first-frame pseudo-GT proposals; independent of
  /// selection.score_min, which gates hard-negative candidates.
  double pgt_score_min = kDefaultScoreMin;
  PlanConfig plan;
  double min_area_ratio = kDefaultMinAreaRatio;
  EvalConfig eval;

  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Flat `key = value` lines; `#` starts a comment. Keys: T, T1, T2, k,
/// score_min, pgt_score_min, erosion_radius, neg_distance, lambda, alpha,
/// iterations, first_frame_sample_prob, min_area_ratio, eval.enabled,
/// eval.tol, eval.exclude_endpoints. Unknown keys and bad values throw
/// ConfigError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

struct SequenceLayout {
  std::filesystem::path root;
  /// frames/<05d>.pgm or .ppm, indices 0..n-1.
  std::vector<std::filesystem::path> frames;
  bool has_semantic = false;
  bool has_gt = false;
  bool has_predictions = false;

  int frame_count() const noexcept { return static_cast<int>(frames.size()); }
  std::filesystem::path flow_path(int t) const;
  std::filesystem::path proposals_path(int t, ProposalSource source) const;
  std::filesystem::path prediction_path(int t) const;

  /// Throws FormatError for a missing frames/, flow/ or proposals/ directory,
  /// gaps in the frame numbering, or fewer than two frames.
  static SequenceLayout discover(const std::filesystem::path& root);
};

/// Zero-padded five digit frame name, e.g. "00007".
std::string frame_stem(int t);

/// Per-frame intermediates, handed to the observer after each frame >= 1.
struct FrameTrace {
  int frame_index;
  const MotionMask& motion;
  const BinaryMask& prev_prediction;
  /// Score-filtered, class-agnostic proposals of this frame.
  const FrameProposals& candidates;
  std::span<const ConsistencyVerdict> verdicts;
  const HardNegativeSelection& hard_negatives;
  const PositiveSelection& positives;
  const BinaryMask& negatives;
  double negative_distance;
  const LabelMap& labels;
};

using FrameObserver = std::function<void(const FrameTrace&)>;

struct RunSummary {
  int frames = 0;
  ProposalSource source = ProposalSource::instance;
  std::vector<int> pseudo_gt_indices;
  int one_shot_frames = 0;
  std::optional<SequenceReport> metrics;
};

/// Writes pseudo_gt.pgm/.json, motion/, labels/, overlays/, selection.json,
/// plan.json and, when enabled with gt/ and predictions/ present,
/// metrics.json. Frame t only reads inputs indexed <= t and predictions
/// indexed < t.
RunSummary run_sequence(const SequenceLayout& layout, const PipelineConfig& cfg,
                        const std::filesystem::path& out_dir, const FrameObserver& observer = {});

}  // namespace doa
