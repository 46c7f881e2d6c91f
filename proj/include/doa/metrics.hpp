#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "doa/mask.hpp"

namespace doa {

/// Region similarity. Two empty masks agree vacuously (1.0).
double jaccard(const BinaryMask& pred, const BinaryMask& gt);

/// Foreground pixels with a background 4-neighbour or touching the frame edge.
BinaryMask boundary(const BinaryMask& m);

/// Contour F-measure; boundary pixels match when a counterpart lies within
/// `tol` (Euclidean disk).
double f_measure(const BinaryMask& pred, const BinaryMask& gt, int tol);

/// max(1, round(0.008 * frame diagonal)).
int default_boundary_tolerance(int width, int height);

struct FrameScore {
  int frame_index = 0;
  double j = 0.0;
  double f = 0.0;
};

struct SequenceReport {
  std::string sequence;
  std::vector<FrameScore> frames;
  double j_mean = 0.0;
  double f_mean = 0.0;
};

struct EvalOptions {
  std::optional<int> tol;          // default_boundary_tolerance when unset
  bool exclude_endpoints = true;   // drop first and last frame from the means
};

/// Scores aligned prediction/ground-truth lists. `indices` labels the frames
/// (0..n-1 when empty). Needs >= 3 frames when endpoints are excluded.
SequenceReport sequence_report(std::span<const BinaryMask> preds, std::span<const BinaryMask> gts,
                               const EvalOptions& opts = {}, std::span<const int> indices = {});

/// metrics.json: {sequence, j_mean, f_mean, frames: [{index, j, f}]}.
std::string metrics_json(const SequenceReport& report);

/// Scores every <index>.pgm present in both directories.
SequenceReport evaluate_directories(const std::filesystem::path& pred_dir,
                                    const std::filesystem::path& gt_dir, const EvalOptions& opts,
                                    const std::string& sequence_name);

}  // namespace doa
