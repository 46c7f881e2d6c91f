#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "doa/flow.hpp"
#include "doa/mask.hpp"
#include "doa/pnm.hpp"
#include "doa/proposals.hpp"

namespace doa::synth {

enum class Shape { rect, ellipse };

struct ObjectSpec {
  Shape shape = Shape::rect;
  int x = 0;  // position at frame 0
  int y = 0;
  int w = 1;
  int h = 1;
  int vx = 0;  // integer pixels per frame
  int vy = 0;
  bool is_static = true;
  int category = 1;
  /// Shares the target's intensity statistics (not its exact texture).
  bool similar_appearance = false;
  std::uint64_t texture_seed = 0;
};

struct NoiseSpec {
  int jitter_px = 2;           // per-edge boundary jitter, uniform in [-j, j]
  double score_min = 0.85;     // true detections score uniformly in [min, max]
  double score_max = 1.0;
  double false_positive_rate = 0.0;  // chance per frame of one spurious blob
};

struct SceneSpec {
  int width = 0;
  int height = 0;
  int n_frames = 0;
  ObjectSpec target;
  std::vector<ObjectSpec> distractors;
  NoiseSpec noise;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when an object leaves the frame or a field
  /// is out of range.
  void validate() const;
};

SceneSpec scene_from_json(const std::string& text);
std::string scene_to_json(const SceneSpec& spec);

/// Seeded scene with one moving target, two or three static distractors kept
/// clear of the target's path, 2 px detector jitter and occasional false
/// positives. The acceptance suite uses seeds 0..19.
SceneSpec standard_distractor_scene(std::uint64_t seed);

/// In-memory renderer. Objects are indexed in draw order: distractors first,
/// target last (on top).
class SceneRenderer {
 public:
  explicit SceneRenderer(SceneSpec spec);

  const SceneSpec& spec() const noexcept { return spec_; }
  int object_count() const noexcept { return static_cast<int>(objects_.size()); }
  int target_index() const noexcept { return object_count() - 1; }
  const ObjectSpec& object(int i) const { return objects_.at(static_cast<std::size_t>(i)); }
  std::string object_id(int i) const;

  BBox object_box(int i, int t) const;
  /// Full shape, ignoring occlusion.
  BinaryMask shape_mask(int i, int t) const;
  /// Shape minus everything drawn above it.
  BinaryMask visible_mask(int i, int t) const;
  GrayFrame frame(int t) const;
  /// Exact flow from frame t to t+1: the velocity of the topmost object, 0
  /// on background.
  FlowField flow(int t) const;

 private:
  SceneSpec spec_;
  std::vector<ObjectSpec> objects_;
};

struct FrameManifest {
  int index = 0;
  /// Object id for each proposal record, in file order ("false_positive" for
  /// spurious blobs).
  std::vector<std::string> proposal_objects;
  /// Static distractors at least half visible in this frame.
  std::vector<std::string> planted_hard_negatives;
};

struct Manifest {
  int width = 0;
  int height = 0;
  int n_frames = 0;
  std::uint64_t seed = 0;
  std::vector<FrameManifest> frames;
};

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);

/// Writes frames/, flow/, proposals/, gt/, scene.json and manifest.json.
Manifest generate(const SceneSpec& spec, const std::filesystem::path& out_dir);

struct SelectionScore {
  double precision = 1.0;
  double recall = 1.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

/// Precision/recall of selected proposal records (per frame, by record index)
/// against the planted static distractors, over frames 1..n-1.
SelectionScore score_selection(const Manifest& manifest,
                               const std::map<int, std::vector<int>>& selected_records);

}  // namespace doa::synth
