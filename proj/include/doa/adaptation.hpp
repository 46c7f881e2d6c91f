#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "doa/distractor.hpp"
#include "doa/mask.hpp"

namespace doa {

inline constexpr double kProbEpsilon = 1e-7;

/// Foreground probabilities, clamped to [eps, 1 - eps] on construction.
class ProbMap {
 public:
  ProbMap(int width, int height, std::vector<double> p);
  ProbMap(int width, int height, double fill);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const noexcept { return p_[i]; }
  std::span<const double> values() const noexcept { return p_; }

 private:
  int width_;
  int height_;
  std::vector<double> p_;
};

struct RegionLoss {
  double value = 0.0;
  std::size_t pixels = 0;
  /// Set when the region had no pixels; value is then 0.
  bool empty = true;
};

/// Mean binary cross-entropy over the region's pixels against a constant
/// target (true = foreground).
RegionLoss pixel_loss(const ProbMap& p, const BinaryMask& region, bool foreground_target);

struct LossBreakdown {
  double hard_negative = 0.0;  // L_hn
  double negative = 0.0;       // L_n
  double positive = 0.0;       // L_pos
  double current = 0.0;        // L_curr = lambda*L_hn + (1-lambda)*L_n + L_pos
  double first_frame = 0.0;    // L_ff
  double total = 0.0;          // L_total = alpha*L_ff + (1-alpha)*L_curr
  std::size_t n_hard_negative = 0;
  std::size_t n_negative = 0;
  std::size_t n_positive = 0;
};

/// Per-class losses on the current frame. Throws std::invalid_argument for a
/// one_shot label map or lambda outside [0, 1].
LossBreakdown current_frame_loss(const ProbMap& p, const LabelMap& labels, double lambda);

/// First-frame loss against the pseudo ground truth: mean BCE over its
/// foreground plus mean BCE over its background.
double first_frame_loss(const ProbMap& p_first, const BinaryMask& pseudo_gt);

double total_loss(const LossBreakdown& curr, double ff_loss, double alpha);

/// Everything the composite loss needs besides the current-frame labels.
struct FirstFrameTerm {
  const ProbMap& prob;
  const BinaryMask& pseudo_gt;
};

/// Full breakdown with first_frame and total filled in.
LossBreakdown composite_loss(const ProbMap& p, const LabelMap& labels, double lambda, double alpha,
                             const FirstFrameTerm& ff);

struct LossGradient {
  std::vector<double> current;      // dL_total / dp, current frame
  std::vector<double> first_frame;  // dL_total / dp, first frame
};

/// Analytic gradient of composite_loss. Unlabeled pixels get 0.
LossGradient loss_gradient(const ProbMap& p, const LabelMap& labels, double lambda, double alpha,
                           const FirstFrameTerm& ff);

struct PlanConfig {
  double lambda = 0.8;
  double alpha = 0.95;
  int iterations = 15;
  double first_frame_sample_prob = 0.95;

  friend bool operator==(const PlanConfig&, const PlanConfig&) = default;
};

/// What build_plan needs to know about one frame's selection.
struct FrameSelectionSummary {
  int frame_index = 0;
  AdaptMode mode = AdaptMode::adapt;
  bool has_hard_negatives = false;
  std::string label_map_path;
};

struct PlanRecord {
  int frame_index = 0;
  AdaptMode mode = AdaptMode::adapt;
  double lambda = 0.0;
  double alpha = 0.0;
  int iterations = 0;
  double first_frame_sample_prob = 0.0;
  std::string label_map_path;  // empty for one_shot frames
  std::string pseudo_gt_path;

  friend bool operator==(const PlanRecord&, const PlanRecord&) = default;
};

struct AdaptationPlan {
  std::vector<PlanRecord> frames;
  friend bool operator==(const AdaptationPlan&, const AdaptationPlan&) = default;
};

/// lambda is zeroed on frames without hard negatives; one_shot frames carry
/// no label map path.
AdaptationPlan build_plan(std::span<const FrameSelectionSummary> frames, const PlanConfig& cfg,
                          const std::string& pseudo_gt_path);

/// Pretty-printed JSON with a fixed key order.
std::string serialize_plan(const AdaptationPlan& plan);
AdaptationPlan parse_plan(std::string_view text);

}  // namespace doa
