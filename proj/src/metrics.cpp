#include "doa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "doa/error.hpp"
#include "doa/pnm.hpp"

namespace doa {

double jaccard(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred, gt);
  if (pred.none() && gt.none()) return 1.0;
  return iou(pred, gt);
}

BinaryMask boundary(const BinaryMask& m) {
  BinaryMask out(m.width(), m.height());
  const int w = m.width(), h = m.height();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.at(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == w - 1 || y == h - 1 || !m.at(x - 1, y) ||
                        !m.at(x + 1, y) || !m.at(x, y - 1) || !m.at(x, y + 1);
      if (edge) out.set(x, y);
    }
  }
  return out;
}

double f_measure(const BinaryMask& pred, const BinaryMask& gt, int tol) {
  require_same_shape(pred, gt);
  if (tol < 0) throw std::invalid_argument("f_measure: tolerance must be >= 0");
  const BinaryMask bp = boundary(pred);
  const BinaryMask bg = boundary(gt);
  const std::size_t np = bp.count(), ng = bg.count();
  if (np == 0 && ng == 0) return 1.0;
  const double precision =
      np == 0 ? 1.0 : static_cast<double>(intersection_count(bp, dilate(bg, tol))) / static_cast<double>(np);
  const double recall =
      ng == 0 ? 1.0 : static_cast<double>(intersection_count(bg, dilate(bp, tol))) / static_cast<double>(ng);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

int default_boundary_tolerance(int width, int height) {
  const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
  return std::max(1, static_cast<int>(std::lround(0.008 * diag)));
}

SequenceReport sequence_report(std::span<const BinaryMask> preds, std::span<const BinaryMask> gts,
                               const EvalOptions& opts, std::span<const int> indices) {
  if (preds.size() != gts.size()) {
    throw std::invalid_argument("sequence_report: " + std::to_string(preds.size()) +
                                " predictions vs " + std::to_string(gts.size()) + " ground truths");
  }
  if (!indices.empty() && indices.size() != preds.size()) {
    throw std::invalid_argument("sequence_report: index list length mismatch");
  }
  const std::size_t min_frames = opts.exclude_endpoints ? 3 : 1;
  if (preds.size() < min_frames) {
    throw std::invalid_argument("sequence_report: need at least " + std::to_string(min_frames) +
                                " frames");
  }
  SequenceReport rep;
  double j_sum = 0.0, f_sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const int tol = opts.tol.value_or(default_boundary_tolerance(gts[i].width(), gts[i].height()));
    FrameScore s{indices.empty() ? static_cast<int>(i) : indices[i], jaccard(preds[i], gts[i]),
                 f_measure(preds[i], gts[i], tol)};
    rep.frames.push_back(s);
    if (opts.exclude_endpoints && (i == 0 || i + 1 == preds.size())) continue;
    j_sum += s.j;
    f_sum += s.f;
    ++counted;
  }
  rep.j_mean = j_sum / static_cast<double>(counted);
  rep.f_mean = f_sum / static_cast<double>(counted);
  return rep;
}

std::string metrics_json(const SequenceReport& report) {
  nlohmann::ordered_json doc;
  doc["sequence"] = report.sequence;
  doc["j_mean"] = report.j_mean;
  doc["f_mean"] = report.f_mean;
  doc["frames"] = nlohmann::ordered_json::array();
  for (const auto& f : report.frames) {
    nlohmann::ordered_json rec;
    rec["index"] = f.frame_index;
    rec["j"] = f.j;
    rec["f"] = f.f;
    doc["frames"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

namespace {

// <digits>.pgm files keyed by their numeric index.
std::map<int, std::filesystem::path> indexed_pgms(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw FormatError("missing directory " + dir.string());
  std::map<int, std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".pgm") continue;
    const std::string stem = entry.path().stem().string();
    if (stem.empty() || !std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      continue;
    }
    out.emplace(std::stoi(stem), entry.path());
  }
  return out;
}

}  // namespace

SequenceReport evaluate_directories(const std::filesystem::path& pred_dir,
                                    const std::filesystem::path& gt_dir, const EvalOptions& opts,
                                    const std::string& sequence_name) {
  const auto preds = indexed_pgms(pred_dir);
  const auto gts = indexed_pgms(gt_dir);
  std::vector<BinaryMask> p, g;
  std::vector<int> idx;
  for (const auto& [i, gt_path] : gts) {
    auto it = preds.find(i);
    if (it == preds.end()) continue;
    g.push_back(read_mask_pgm(gt_path));
    p.push_back(read_mask_pgm(it->second));
    require_same_shape(p.back(), g.back());
    idx.push_back(i);
  }
  if (idx.empty()) throw FormatError("no frames shared between " + pred_dir.string() + " and " + gt_dir.string());
  SequenceReport rep = sequence_report(p, g, opts, idx);
  rep.sequence = sequence_name;
  return rep;
}

}  // namespace doa
