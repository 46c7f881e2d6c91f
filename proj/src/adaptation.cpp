#include "doa/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "doa/error.hpp"

namespace doa {
namespace {

double clamp_prob(double p) {
  if (std::isnan(p)) throw std::invalid_argument("probability map contains NaN");
  return std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
}

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void require_adapt(const ProbMap& p, const LabelMap& labels) {
  if (labels.mode() == AdaptMode::one_shot) {
    throw std::invalid_argument("current-frame loss is undefined for a one_shot label map");
  }
  if (p.width() != labels.width() || p.height() != labels.height()) {
    throw DimensionError("probability map and label map dimensions differ");
  }
}

// Mean BCE over pixels whose label equals `which`, without materializing a mask.
RegionLoss label_loss(const ProbMap& p, const LabelMap& labels, Label which, bool fg) {
  RegionLoss r;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (labels[i] != which) continue;
    sum += fg ? -std::log(p[i]) : -std::log(1.0 - p[i]);
    ++r.pixels;
  }
  if (r.pixels > 0) {
    r.empty = false;
    r.value = sum / static_cast<double>(r.pixels);
  }
  return r;
}

}  // namespace

ProbMap::ProbMap(int width, int height, std::vector<double> p)
    : width_(width), height_(height), p_(std::move(p)) {
  if (width < 1 || height < 1) throw std::invalid_argument("probability map dimensions must be >= 1");
  if (p_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("probability map length does not match width*height");
  }
  for (double& v : p_) v = clamp_prob(v);
}

ProbMap::ProbMap(int width, int height, double fill)
    : ProbMap(width, height,
              std::vector<double>(static_cast<std::size_t>(std::max(width, 0)) *
                                      static_cast<std::size_t>(std::max(height, 0)),
                                  fill)) {}

RegionLoss pixel_loss(const ProbMap& p, const BinaryMask& region, bool foreground_target) {
  if (p.width() != region.width() || p.height() != region.height()) {
    throw DimensionError("probability map and region dimensions differ");
  }
  RegionLoss r;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!region[i]) continue;
    sum += foreground_target ? -std::log(p[i]) : -std::log(1.0 - p[i]);
    ++r.pixels;
  }
  if (r.pixels > 0) {
    r.empty = false;
    r.value = sum / static_cast<double>(r.pixels);
  }
  return r;
}

LossBreakdown current_frame_loss(const ProbMap& p, const LabelMap& labels, double lambda) {
  require_unit(lambda, "lambda");
  require_adapt(p, labels);
  const RegionLoss hn = label_loss(p, labels, Label::hard_negative, false);
  const RegionLoss n = label_loss(p, labels, Label::negative, false);
  const RegionLoss pos = label_loss(p, labels, Label::positive, true);
  LossBreakdown b;
  b.hard_negative = hn.value;
  b.negative = n.value;
  b.positive = pos.value;
  b.n_hard_negative = hn.pixels;
  b.n_negative = n.pixels;
  b.n_positive = pos.pixels;
  b.current = lambda * hn.value + (1.0 - lambda) * n.value + pos.value;
  return b;
}

double first_frame_loss(const ProbMap& p_first, const BinaryMask& pseudo_gt) {
  BinaryMask background(pseudo_gt.width(), pseudo_gt.height());
  auto bits = background.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = pseudo_gt[i] ? 0 : 1;
  return pixel_loss(p_first, pseudo_gt, true).value + pixel_loss(p_first, background, false).value;
}

double total_loss(const LossBreakdown& curr, double ff_loss, double alpha) {
  require_unit(alpha, "alpha");
  return alpha * ff_loss + (1.0 - alpha) * curr.current;
}

LossBreakdown composite_loss(const ProbMap& p, const LabelMap& labels, double lambda, double alpha,
                             const FirstFrameTerm& ff) {
  LossBreakdown b = current_frame_loss(p, labels, lambda);
  b.first_frame = first_frame_loss(ff.prob, ff.pseudo_gt);
  b.total = total_loss(b, b.first_frame, alpha);
  return b;
}

LossGradient loss_gradient(const ProbMap& p, const LabelMap& labels, double lambda, double alpha,
                           const FirstFrameTerm& ff) {
  require_unit(lambda, "lambda");
  require_unit(alpha, "alpha");
  require_adapt(p, labels);
  if (ff.prob.width() != ff.pseudo_gt.width() || ff.prob.height() != ff.pseudo_gt.height()) {
    throw DimensionError("first-frame probability map and pseudo-GT dimensions differ");
  }

  const auto per_pixel = [](double weight, std::size_t n) {
    return n == 0 ? 0.0 : weight / static_cast<double>(n);
  };
  const double w_hn = per_pixel((1.0 - alpha) * lambda, labels.count(Label::hard_negative));
  const double w_n = per_pixel((1.0 - alpha) * (1.0 - lambda), labels.count(Label::negative));
  const double w_pos = per_pixel(1.0 - alpha, labels.count(Label::positive));

  LossGradient g;
  g.current.assign(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    switch (labels[i]) {
      case Label::hard_negative: g.current[i] = w_hn / (1.0 - p[i]); break;
      case Label::negative: g.current[i] = w_n / (1.0 - p[i]); break;
      case Label::positive: g.current[i] = -w_pos / p[i]; break;
      case Label::unlabeled: break;
    }
  }

  const std::size_t n_fg = ff.pseudo_gt.count();
  const double w_fg = per_pixel(alpha, n_fg);
  const double w_bg = per_pixel(alpha, ff.pseudo_gt.size() - n_fg);
  g.first_frame.assign(ff.prob.size(), 0.0);
  for (std::size_t i = 0; i < ff.prob.size(); ++i) {
    g.first_frame[i] = ff.pseudo_gt[i] ? -w_fg / ff.prob[i] : w_bg / (1.0 - ff.prob[i]);
  }
  return g;
}

AdaptationPlan build_plan(std::span<const FrameSelectionSummary> frames, const PlanConfig& cfg,
                          const std::string& pseudo_gt_path) {
  AdaptationPlan plan;
  plan.frames.reserve(frames.size());
  for (const auto& f : frames) {
    PlanRecord r;
    r.frame_index = f.frame_index;
    r.mode = f.mode;
    r.lambda = f.has_hard_negatives && f.mode == AdaptMode::adapt ? cfg.lambda : 0.0;
    r.alpha = cfg.alpha;
    r.iterations = cfg.iterations;
    r.first_frame_sample_prob = cfg.first_frame_sample_prob;
    if (f.mode == AdaptMode::adapt) r.label_map_path = f.label_map_path;
    r.pseudo_gt_path = pseudo_gt_path;
    plan.frames.push_back(std::move(r));
  }
  return plan;
}

std::string serialize_plan(const AdaptationPlan& plan) {
  nlohmann::ordered_json doc;
  doc["frames"] = nlohmann::ordered_json::array();
  for (const auto& r : plan.frames) {
    nlohmann::ordered_json rec;
    rec["frame_index"] = r.frame_index;
    rec["mode"] = std::string(to_string(r.mode));
    rec["lambda"] = r.lambda;
    rec["alpha"] = r.alpha;
    rec["iterations"] = r.iterations;
    rec["first_frame_sample_prob"] = r.first_frame_sample_prob;
    if (!r.label_map_path.empty()) rec["label_map_path"] = r.label_map_path;
    rec["pseudo_gt_path"] = r.pseudo_gt_path;
    doc["frames"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

AdaptationPlan parse_plan(std::string_view text) {
  AdaptationPlan plan;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& rec : doc.at("frames")) {
      PlanRecord r;
      r.frame_index = rec.at("frame_index").get<int>();
      r.mode = adapt_mode_from_string(rec.at("mode").get<std::string>());
      r.lambda = rec.at("lambda").get<double>();
      r.alpha = rec.at("alpha").get<double>();
      r.iterations = rec.at("iterations").get<int>();
      r.first_frame_sample_prob = rec.at("first_frame_sample_prob").get<double>();
      if (rec.contains("label_map_path")) r.label_map_path = rec["label_map_path"].get<std::string>();
      r.pseudo_gt_path = rec.at("pseudo_gt_path").get<std::string>();
      plan.frames.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("adaptation plan: ") + e.what());
  }
  return plan;
}

}  // namespace doa
