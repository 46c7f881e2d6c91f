#include "doa/distractor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "doa/error.hpp"
#include "doa/pnm.hpp"

namespace doa {

std::string_view to_string(AdaptMode mode) { return mode == AdaptMode::adapt ? "adapt" : "one_shot"; }

AdaptMode adapt_mode_from_string(std::string_view s) {
  if (s == "adapt") return AdaptMode::adapt;
  if (s == "one_shot") return AdaptMode::one_shot;
  throw FormatError("unknown adaptation mode '" + std::string(s) + "'");
}

LabelMap::LabelMap(int width, int height, AdaptMode mode)
    : width_(width), height_(height), mode_(mode) {
  if (width < 1 || height < 1) throw std::invalid_argument("label map dimensions must be >= 1");
  labels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), Label::unlabeled);
}

BinaryMask LabelMap::region(Label l) const {
  BinaryMask m(width_, height_);
  auto bits = m.bits();
  for (std::size_t i = 0; i < labels_.size(); ++i) bits[i] = labels_[i] == l ? 1 : 0;
  return m;
}

std::size_t LabelMap::count(Label l) const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), l));
}

double SelectionConfig::negative_distance_for(int width, int height) const {
  if (negative_distance) return *negative_distance;
  return std::round(0.15 * std::hypot(static_cast<double>(width), static_cast<double>(height)));
}

void SelectionConfig::validate() const {
  const auto ratio = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  ratio(motion_overlap_max, "T1");
  ratio(consistency_iou_min, "T2");
  if (consistency_iou_min == 0.0) throw ConfigError("T2 must lie in (0, 1]");
  ratio(score_min, "score_min");
  if (!(pseudo_gt_threshold >= 0.0 && pseudo_gt_threshold < 1.0)) {
    throw ConfigError("T must lie in [0, 1)");
  }
  if (history_frames < 1) throw ConfigError("k must be >= 1");
  if (erosion_radius < 0) throw ConfigError("erosion_radius must be >= 0");
  if (negative_distance && !(*negative_distance > 0.0 && std::isfinite(*negative_distance))) {
    throw ConfigError("neg_distance must be > 0");
  }
}

HardNegativeSelection select_hard_negatives(const FrameProposals& fp, const MotionMask& motion,
                                            std::span<const ConsistencyVerdict> verdicts,
                                            const SelectionConfig& cfg) {
  if (verdicts.size() != fp.proposals.size()) {
    throw std::invalid_argument("select_hard_negatives: " + std::to_string(verdicts.size()) +
                                " verdicts for " + std::to_string(fp.proposals.size()) +
                                " proposals");
  }
  HardNegativeSelection out{BinaryMask(motion.mask.width(), motion.mask.height()), {}};
  for (std::size_t i = 0; i < fp.proposals.size(); ++i) {
    if (!verdicts[i].consistent) continue;
    const auto& p = fp.proposals[i];
    if (overlap_ratio(p.mask, motion.mask) < cfg.motion_overlap_max) {
      out.mask |= p.mask;
      out.selected.push_back(static_cast<int>(i));
    }
  }
  return out;
}

BinaryMask select_negatives(const BinaryMask& pos, double distance) {
  if (!(distance > 0.0)) throw std::invalid_argument("select_negatives: distance must be > 0");
  BinaryMask out(pos.width(), pos.height());
  if (pos.none()) return out;
  const auto sq = squared_distance_transform(pos);
  auto bits = out.bits();
  for (std::size_t i = 0; i < sq.size(); ++i) bits[i] = std::sqrt(sq[i]) > distance ? 1 : 0;
  return out;
}

PositiveSelection select_positives(const BinaryMask& prev_pred, const MotionMask& motion,
                                   int erosion_radius) {
  require_same_shape(prev_pred, motion.mask);
  BinaryMask pos = erode(prev_pred, erosion_radius) & motion.mask;
  if (pos.none()) return {BinaryMask(prev_pred.width(), prev_pred.height()), AdaptMode::one_shot};
  return {std::move(pos), AdaptMode::adapt};
}

LabelMap assemble_labels(const BinaryMask& pos, const BinaryMask& neg, const BinaryMask& hardneg,
                         AdaptMode mode) {
  require_same_shape(pos, neg);
  require_same_shape(pos, hardneg);
  LabelMap out(pos.width(), pos.height(), mode);
  if (mode == AdaptMode::one_shot) return out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (pos[i]) {
      out.set(i, Label::positive);
    } else if (hardneg[i]) {
      out.set(i, Label::hard_negative);
    } else if (neg[i]) {
      out.set(i, Label::negative);
    }
  }
  return out;
}

void write_label_map(const LabelMap& labels, const std::filesystem::path& pgm_path,
                     const std::filesystem::path& sidecar_path) {
  GrayFrame img(labels.width(), labels.height());
  for (std::size_t i = 0; i < labels.size(); ++i) img.intensity[i] = static_cast<std::uint8_t>(labels[i]);
  write_pgm(pgm_path, img);
  nlohmann::ordered_json side;
  side["mode"] = std::string(to_string(labels.mode()));
  std::ofstream out(sidecar_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + sidecar_path.string());
  out << side.dump(2) << '\n';
}

LabelMap read_label_map(const std::filesystem::path& pgm_path,
                        const std::filesystem::path& sidecar_path) {
  std::ifstream in(sidecar_path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + sidecar_path.string());
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(sidecar_path.string() + ": " + e.what());
  }
  if (!side.contains("mode") || !side["mode"].is_string()) {
    throw FormatError(sidecar_path.string() + ": missing 'mode'");
  }
  const GrayFrame img = read_frame(pgm_path);
  LabelMap labels(img.width, img.height, adapt_mode_from_string(side["mode"].get<std::string>()));
  for (std::size_t i = 0; i < img.intensity.size(); ++i) {
    switch (img.intensity[i]) {
      case 0: break;
      case 64: labels.set(i, Label::negative); break;
      case 128: labels.set(i, Label::hard_negative); break;
      case 255: labels.set(i, Label::positive); break;
      default:
        throw FormatError(pgm_path.string() + ": invalid label code " + std::to_string(img.intensity[i]));
    }
  }
  return labels;
}

}  // namespace doa
