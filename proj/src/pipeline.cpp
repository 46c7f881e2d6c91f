#include "doa/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <regex>

#include <json.hpp>

#include "doa/error.hpp"
#include "doa/pnm.hpp"
#include "doa/pseudo_gt.hpp"

namespace doa {
namespace fs = std::filesystem;

std::string frame_stem(int t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", t);
  return buf;
}

fs::path SequenceLayout::flow_path(int t) const { return root / "flow" / (frame_stem(t) + ".flo"); }

fs::path SequenceLayout::proposals_path(int t, ProposalSource source) const {
  return root / (source == ProposalSource::semantic ? "semantic" : "proposals") / (frame_stem(t) + ".jsonl");
}

fs::path SequenceLayout::prediction_path(int t) const {
  return root / "predictions" / (frame_stem(t) + ".pgm");
}

SequenceLayout SequenceLayout::discover(const fs::path& root) {
  if (!fs::is_directory(root)) throw FormatError("sequence directory not found: " + root.string());
  for (const char* required : {"frames", "flow", "proposals"}) {
    if (!fs::is_directory(root / required)) {
      throw FormatError("missing input directory " + std::string(required) + "/ in " + root.string());
    }
  }
  SequenceLayout layout;
  layout.root = root;
  static const std::regex name(R"((\d{5})\.(pgm|ppm))");
  std::map<int, fs::path> found;
  for (const auto& entry : fs::directory_iterator(root / "frames")) {
    std::smatch m;
    const std::string file = entry.path().filename().string();
    if (!entry.is_regular_file() || !std::regex_match(file, m, name)) continue;
    const int t = std::stoi(m[1].str());
    if (!found.emplace(t, entry.path()).second) {
      throw FormatError("frame " + std::to_string(t) + " exists as both .pgm and .ppm");
    }
  }
  int expected = 0;
  for (const auto& [t, path] : found) {
    if (t != expected) throw FormatError("frames/ is missing frame " + frame_stem(expected));
    layout.frames.push_back(path);
    ++expected;
  }
  if (layout.frames.size() < 2) throw FormatError("a sequence needs at least two frames");
  layout.has_semantic = fs::is_directory(root / "semantic");
  layout.has_gt = fs::is_directory(root / "gt");
  layout.has_predictions = fs::is_directory(root / "predictions");
  return layout;
}

namespace {

using nlohmann::ordered_json;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

void require_frame_size(int w, int h, int width, int height, const std::string& what) {
  if (w != width || h != height) {
    throw DimensionError(what + " is " + std::to_string(w) + "x" + std::to_string(h) + ", frames are " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

/// Reads one frame's proposals, filters by score and collapses categories.
FrameProposals load_candidates(const SequenceLayout& layout, int t, ProposalSource source, double score_min,
                               int width, int height) {
  FrameProposals fp = parse_proposals(layout.proposals_path(t, source), t, source);
  for (const auto& p : fp.proposals) {
    require_frame_size(p.mask.width(), p.mask.height(), width, height,
                       "proposal mask in " + layout.proposals_path(t, source).filename().string());
  }
  return to_class_agnostic(filter_by_score(fp, score_min));
}

MotionMask load_motion(const SequenceLayout& layout, int t, double min_area_ratio, int width, int height) {
  // The last frame has no outgoing flow; it reuses the previous pair's field.
  const int flow_index = std::min(t, layout.frame_count() - 2);
  const FlowField flow = read_flo(layout.flow_path(flow_index));
  require_frame_size(flow.width(), flow.height(), width, height, "flow " + frame_stem(flow_index));
  return flow_saliency(flow, min_area_ratio, t);
}

RgbImage render_overlay(const GrayFrame& frame, const LabelMap& labels) {
  RgbImage img{frame.width, frame.height, std::vector<std::uint8_t>(frame.intensity.size() * 3)};
  const BinaryMask outline = boundary(labels.region(Label::hard_negative));
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(frame.width) +
                            static_cast<std::size_t>(x);
      const std::uint8_t g = frame.intensity[i];
      std::uint8_t r = g, gr = g, b = g;
      if (outline.at(x, y)) {
        r = 0, gr = 255, b = 0;
      } else if (labels[i] == Label::positive) {
        r = static_cast<std::uint8_t>((g + 255) / 2);
        gr = r;
        b = static_cast<std::uint8_t>(g / 2);
      } else if (labels[i] == Label::negative && (x + y) % 4 == 0) {
        r = 255, gr = 0, b = 0;
      }
      img.rgb[3 * i] = r;
      img.rgb[3 * i + 1] = gr;
      img.rgb[3 * i + 2] = b;
    }
  }
  return img;
}

std::string sequence_name(const fs::path& root) {
  const fs::path p = root.lexically_normal();
  return p.has_filename() ? p.filename().string() : p.parent_path().filename().string();
}

}  // namespace

RunSummary run_sequence(const SequenceLayout& layout, const PipelineConfig& cfg, const fs::path& out_dir,
                        const FrameObserver& observer) {
  cfg.validate();
  const int n = layout.frame_count();
  for (const char* sub : {"motion", "labels", "overlays"}) fs::create_directories(out_dir / sub);

  std::vector<GrayFrame> frames;
  frames.push_back(read_frame(layout.frames[0]));
  const int width = frames[0].width, height = frames[0].height;

  RunSummary summary;
  summary.frames = n;

  // First frame: choose the proposal source, then fuse with motion.
  const FrameProposals first_instances =
      filter_by_score(parse_proposals(layout.proposals_path(0, ProposalSource::instance), 0), cfg.pgt_score_min);
  const ProposalSource source = select_source(first_instances, layout.has_semantic);
  summary.source = source;

  const MotionMask motion0 = load_motion(layout, 0, cfg.min_area_ratio, width, height);
  write_mask_pgm(out_dir / "motion" / (frame_stem(0) + ".pgm"), motion0.mask);
  const FrameProposals pgt_candidates = load_candidates(layout, 0, source, cfg.pgt_score_min, width, height);
  PseudoGroundTruth pgt = generate_pseudo_gt(pgt_candidates, motion0, cfg.selection.pseudo_gt_threshold);
  // Report file record numbers, not positions in the filtered list.
  for (int& i : pgt.selected_indices) i = pgt_candidates.proposals[static_cast<std::size_t>(i)].record_index;
  write_pseudo_gt(pgt, out_dir / "pseudo_gt.pgm", out_dir / "pseudo_gt.json");
  summary.pseudo_gt_indices = pgt.selected_indices;

  std::vector<FrameProposals> candidates;
  candidates.push_back(load_candidates(layout, 0, source, cfg.selection.score_min, width, height));

  BinaryMask stand_in = pgt.mask;
  std::vector<FrameSelectionSummary> plan_input;
  ordered_json selection_log = ordered_json::array();
  const double neg_distance = cfg.selection.negative_distance_for(width, height);

  for (int t = 1; t < n; ++t) {
    frames.push_back(read_frame(layout.frames[static_cast<std::size_t>(t)]));
    require_frame_size(frames.back().width, frames.back().height, width, height, "frame " + frame_stem(t));
    candidates.push_back(load_candidates(layout, t, source, cfg.selection.score_min, width, height));
    const GrayFrame& current = frames.back();
    const FrameProposals& fp = candidates.back();

    const MotionMask motion = load_motion(layout, t, cfg.min_area_ratio, width, height);
    write_mask_pgm(out_dir / "motion" / (frame_stem(t) + ".pgm"), motion.mask);

    BinaryMask prev = stand_in;
    if (layout.has_predictions) {
      prev = read_mask_pgm(layout.prediction_path(t - 1));
      require_frame_size(prev.width(), prev.height(), width, height, "prediction " + frame_stem(t - 1));
    }

    std::vector<HistoryEntry> history;
    for (int j = 1; j <= std::min(t, cfg.selection.history_frames); ++j) {
      history.push_back({frames[static_cast<std::size_t>(t - j)], candidates[static_cast<std::size_t>(t - j)]});
    }
    std::vector<ConsistencyVerdict> verdicts;
    verdicts.reserve(fp.proposals.size());
    for (const auto& det : fp.proposals) {
      verdicts.push_back(check_consistency(det, history, current, cfg.selection.consistency_iou_min));
    }

    const HardNegativeSelection hn = select_hard_negatives(fp, motion, verdicts, cfg.selection);
    const PositiveSelection pos = select_positives(prev, motion, cfg.selection.erosion_radius);
    const BinaryMask neg = select_negatives(pos.mask, neg_distance);
    const LabelMap labels = assemble_labels(pos.mask, neg, hn.mask, pos.mode);

    const std::string stem = frame_stem(t);
    write_label_map(labels, out_dir / "labels" / (stem + ".pgm"), out_dir / "labels" / (stem + ".json"));
    write_ppm(out_dir / "overlays" / (stem + ".ppm"), render_overlay(current, labels));

    ordered_json records = ordered_json::array();
    for (int i : hn.selected) records.push_back(fp.proposals[static_cast<std::size_t>(i)].record_index);
    selection_log.push_back(ordered_json{{"index", t},
                                         {"mode", std::string(to_string(pos.mode))},
                                         {"hard_negative_records", records},
                                         {"positive_pixels", labels.count(Label::positive)},
                                         {"negative_pixels", labels.count(Label::negative)},
                                         {"hard_negative_pixels", labels.count(Label::hard_negative)}});
    if (pos.mode == AdaptMode::one_shot) ++summary.one_shot_frames;
    plan_input.push_back({t, pos.mode, labels.count(Label::hard_negative) > 0, "labels/" + stem + ".pgm"});

    if (observer) {
      observer(FrameTrace{t, motion, prev, fp, verdicts, hn, pos, neg, neg_distance, labels});
    }

    if (!layout.has_predictions && t + 1 < n) {
      const FlowField flow = read_flo(layout.flow_path(t - 1));
      stand_in = warp_mask(stand_in, flow);
    }
  }

  write_text(out_dir / "selection.json", ordered_json{{"frames", selection_log}}.dump(2) + "\n");
  write_text(out_dir / "plan.json", serialize_plan(build_plan(plan_input, cfg.plan, "pseudo_gt.pgm")));

  if (cfg.eval.enabled && layout.has_gt && layout.has_predictions) {
    const EvalOptions opts{cfg.eval.tol, cfg.eval.exclude_endpoints};
    summary.metrics = evaluate_directories(layout.root / "predictions", layout.root / "gt", opts,
                                           sequence_name(layout.root));
    write_text(out_dir / "metrics.json", metrics_json(*summary.metrics));
  }
  return summary;
}

}  // namespace doa
