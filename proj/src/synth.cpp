#include "doa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "doa/error.hpp"

namespace doa::synth {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Explicit arithmetic on mt19937_64 output: the standard distributions are
// implementation-defined and would break byte-identical output across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool chance(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint8_t texel(std::uint64_t seed, int x, int y, int base, int amplitude) {
  const std::uint64_t h =
      splitmix(seed ^ splitmix(static_cast<std::uint64_t>(x) * 0x632be59bd9b4e019ULL +
                               static_cast<std::uint64_t>(y)));
  const int v = base - amplitude + static_cast<int>(h % static_cast<std::uint64_t>(2 * amplitude + 1));
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

constexpr int kBackgroundBase = 100, kBackgroundAmp = 30;
constexpr int kTargetBase = 180, kTargetAmp = 40;
constexpr int kPlainBase = 60, kPlainAmp = 35;

bool in_shape(Shape shape, int bx, int by, int bw, int bh, int px, int py) {
  if (px < bx || py < by || px >= bx + bw || py >= by + bh) return false;
  if (shape == Shape::rect) return true;
  const double ax = bw / 2.0, ay = bh / 2.0;
  const double dx = (px + 0.5 - bx - ax) / ax;
  const double dy = (py + 0.5 - by - ay) / ay;
  return dx * dx + dy * dy <= 1.0;
}

BinaryMask render_shape(Shape shape, int bx, int by, int bw, int bh, int width, int height) {
  BinaryMask m(width, height);
  for (int y = std::max(0, by); y < std::min(height, by + bh); ++y) {
    for (int x = std::max(0, bx); x < std::min(width, bx + bw); ++x) {
      if (in_shape(shape, bx, by, bw, bh, x, y)) m.set(x, y);
    }
  }
  return m;
}

std::string shape_name(Shape s) { return s == Shape::rect ? "rect" : "ellipse"; }

Shape shape_from(const std::string& s) {
  if (s == "rect") return Shape::rect;
  if (s == "ellipse") return Shape::ellipse;
  throw FormatError("unknown shape '" + s + "'");
}

ordered_json object_to_json(const ObjectSpec& o) {
  ordered_json j;
  j["shape"] = shape_name(o.shape);
  j["x"] = o.x;
  j["y"] = o.y;
  j["w"] = o.w;
  j["h"] = o.h;
  j["vx"] = o.vx;
  j["vy"] = o.vy;
  j["static"] = o.is_static;
  j["category"] = o.category;
  j["similar"] = o.similar_appearance;
  j["texture_seed"] = o.texture_seed;
  return j;
}

ObjectSpec object_from_json(const json& j, bool is_target) {
  ObjectSpec o;
  o.shape = shape_from(j.value("shape", std::string("rect")));
  o.x = j.at("x").get<int>();
  o.y = j.at("y").get<int>();
  o.w = j.at("w").get<int>();
  o.h = j.at("h").get<int>();
  o.vx = j.value("vx", 0);
  o.vy = j.value("vy", 0);
  o.is_static = j.value("static", !is_target && o.vx == 0 && o.vy == 0);
  o.category = j.value("category", 1);
  o.similar_appearance = j.value("similar", false);
  o.texture_seed = j.value("texture_seed", std::uint64_t{0});
  return o;
}

}  // namespace

void SceneSpec::validate() const {
  if (width < 8 || height < 8) throw std::invalid_argument("scene frame must be at least 8x8");
  if (n_frames < 2) throw std::invalid_argument("scene needs at least 2 frames");
  if (noise.jitter_px < 0) throw std::invalid_argument("jitter_px must be >= 0");
  if (!(noise.score_min >= 0.0 && noise.score_min <= noise.score_max && noise.score_max <= 1.0)) {
    throw std::invalid_argument("detector score range must satisfy 0 <= min <= max <= 1");
  }
  if (!(noise.false_positive_rate >= 0.0 && noise.false_positive_rate <= 1.0)) {
    throw std::invalid_argument("false_positive_rate must lie in [0, 1]");
  }
  const auto check = [&](const ObjectSpec& o, const std::string& what) {
    if (o.w < 1 || o.h < 1) throw std::invalid_argument(what + ": size must be >= 1");
    if (o.is_static && (o.vx != 0 || o.vy != 0)) {
      throw std::invalid_argument(what + ": static object with nonzero velocity");
    }
    for (int t : {0, n_frames - 1}) {
      const BBox b{o.x + o.vx * t, o.y + o.vy * t, o.w, o.h};
      if (!b.within(width, height)) {
        throw std::invalid_argument(what + " leaves the frame at t=" + std::to_string(t));
      }
    }
  };
  check(target, "target");
  for (std::size_t i = 0; i < distractors.size(); ++i) check(distractors[i], "distractor " + std::to_string(i));
}

SceneSpec scene_from_json(const std::string& text) {
  SceneSpec s;
  try {
    const json j = json::parse(text);
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    s.n_frames = j.at("n_frames").get<int>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.target = object_from_json(j.at("target"), true);
    s.target.is_static = false;
    if (j.contains("distractors")) {
      for (const auto& d : j["distractors"]) s.distractors.push_back(object_from_json(d, false));
    }
    if (j.contains("noise")) {
      const auto& n = j["noise"];
      s.noise.jitter_px = n.value("jitter_px", s.noise.jitter_px);
      s.noise.score_min = n.value("score_min", s.noise.score_min);
      s.noise.score_max = n.value("score_max", s.noise.score_max);
      s.noise.false_positive_rate = n.value("false_positive_rate", s.noise.false_positive_rate);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("scene spec: ") + e.what());
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("scene spec: ") + e.what());
  }
  return s;
}

std::string scene_to_json(const SceneSpec& spec) {
  ordered_json j;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["n_frames"] = spec.n_frames;
  j["seed"] = spec.seed;
  j["target"] = object_to_json(spec.target);
  j["distractors"] = ordered_json::array();
  for (const auto& d : spec.distractors) j["distractors"].push_back(object_to_json(d));
  j["noise"] = ordered_json{{"jitter_px", spec.noise.jitter_px},
                            {"score_min", spec.noise.score_min},
                            {"score_max", spec.noise.score_max},
                            {"false_positive_rate", spec.noise.false_positive_rate}};
  return j.dump(2) + "\n";
}

SceneSpec standard_distractor_scene(std::uint64_t seed) {
  Rng rng(splitmix(seed + 0x5eed));
  SceneSpec s;
  s.width = 224;
  s.height = 160;
  s.n_frames = 10;
  s.seed = seed;
  s.noise = NoiseSpec{2, 0.85, 1.0, 0.3};

  const int last = s.n_frames - 1;
  ObjectSpec& t = s.target;
  t.shape = rng.chance(0.5) ? Shape::ellipse : Shape::rect;
  t.w = rng.uniform_int(36, 48);
  t.h = rng.uniform_int(36, 48);
  t.vx = rng.uniform_int(2, 4) * (rng.chance(0.5) ? 1 : -1);
  t.vy = rng.uniform_int(-1, 1);
  t.is_static = false;
  t.category = 1;
  t.similar_appearance = true;
  t.texture_seed = splitmix(seed ^ 0x7a46);
  const auto place = [&](int size, int v, int extent) {
    const int lo = std::max(0, -v * last);
    const int hi = std::min(extent - size, extent - size - v * last);
    return rng.uniform_int(lo, hi);
  };
  t.x = place(t.w, t.vx, s.width);
  t.y = place(t.h, t.vy, s.height);

  // Distractors stay clear of the whole target sweep so every planted one is
  // fully visible in every frame.
  const int x0 = std::min(t.x, t.x + t.vx * last), y0 = std::min(t.y, t.y + t.vy * last);
  const BBox sweep{x0, y0, std::abs(t.vx) * last + t.w, std::abs(t.vy) * last + t.h};
  const auto clear = [](const BBox& a, const BBox& b, int margin) {
    return a.right() + margin <= b.x || b.right() + margin <= a.x || a.bottom() + margin <= b.y ||
           b.bottom() + margin <= a.y;
  };
  const int wanted = rng.uniform_int(2, 3);
  std::vector<BBox> taken{sweep};
  for (int attempt = 0; attempt < 400 && static_cast<int>(s.distractors.size()) < wanted; ++attempt) {
    ObjectSpec d;
    d.shape = rng.chance(0.5) ? Shape::ellipse : Shape::rect;
    d.w = rng.uniform_int(40, 52);
    d.h = rng.uniform_int(40, 52);
    d.x = rng.uniform_int(0, s.width - d.w);
    d.y = rng.uniform_int(0, s.height - d.h);
    const int margin = rng.uniform_int(6, 12);
    const BBox box{d.x, d.y, d.w, d.h};
    if (!std::all_of(taken.begin(), taken.end(), [&](const BBox& b) { return clear(box, b, margin); })) continue;
    d.is_static = true;
    d.similar_appearance = rng.chance(0.5);
    d.category = d.similar_appearance ? 1 : rng.uniform_int(2, 5);
    d.texture_seed = splitmix(seed * 131 + s.distractors.size() + 1);
    taken.push_back(box);
    s.distractors.push_back(d);
  }
  s.validate();
  return s;
}

SceneRenderer::SceneRenderer(SceneSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  objects_ = spec_.distractors;
  objects_.push_back(spec_.target);
}

std::string SceneRenderer::object_id(int i) const {
  if (i == target_index()) return "target";
  return "distractor_" + std::to_string(i);
}

BBox SceneRenderer::object_box(int i, int t) const {
  const auto& o = object(i);
  return BBox{o.x + o.vx * t, o.y + o.vy * t, o.w, o.h};
}

BinaryMask SceneRenderer::shape_mask(int i, int t) const {
  const BBox b = object_box(i, t);
  return render_shape(object(i).shape, b.x, b.y, b.w, b.h, spec_.width, spec_.height);
}

BinaryMask SceneRenderer::visible_mask(int i, int t) const {
  BinaryMask m = shape_mask(i, t);
  for (int j = i + 1; j < object_count(); ++j) m.subtract(shape_mask(j, t));
  return m;
}

GrayFrame SceneRenderer::frame(int t) const {
  GrayFrame f(spec_.width, spec_.height);
  const std::uint64_t bg_seed = splitmix(spec_.seed ^ 0xb6);
  for (int y = 0; y < spec_.height; ++y) {
    for (int x = 0; x < spec_.width; ++x) f.at(x, y) = texel(bg_seed, x, y, kBackgroundBase, kBackgroundAmp);
  }
  for (int i = 0; i < object_count(); ++i) {
    const auto& o = object(i);
    const bool bright = i == target_index() || o.similar_appearance;
    const int base = bright ? kTargetBase : kPlainBase;
    const int amp = bright ? kTargetAmp : kPlainAmp;
    const BBox b = object_box(i, t);
    for (int y = b.y; y < b.bottom(); ++y) {
      for (int x = b.x; x < b.right(); ++x) {
        // Texture lives in object coordinates, so it travels with the object.
        if (in_shape(o.shape, b.x, b.y, b.w, b.h, x, y)) f.at(x, y) = texel(o.texture_seed, x - b.x, y - b.y, base, amp);
      }
    }
  }
  return f;
}

FlowField SceneRenderer::flow(int t) const {
  FlowField fl(spec_.width, spec_.height);
  for (int i = 0; i < object_count(); ++i) {
    const auto& o = object(i);
    const BBox b = object_box(i, t);
    for (int y = b.y; y < b.bottom(); ++y) {
      for (int x = b.x; x < b.right(); ++x) {
        if (in_shape(o.shape, b.x, b.y, b.w, b.h, x, y)) {
          fl.set(x, y, static_cast<float>(o.vx), static_cast<float>(o.vy));
        }
      }
    }
  }
  return fl;
}

std::string manifest_to_json(const Manifest& m) {
  ordered_json j;
  j["width"] = m.width;
  j["height"] = m.height;
  j["n_frames"] = m.n_frames;
  j["seed"] = m.seed;
  j["frames"] = ordered_json::array();
  for (const auto& f : m.frames) {
    ordered_json fj;
    fj["index"] = f.index;
    fj["proposal_objects"] = f.proposal_objects;
    fj["planted_hard_negatives"] = f.planted_hard_negatives;
    j["frames"].push_back(std::move(fj));
  }
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
  Manifest m;
  try {
    const json j = json::parse(text);
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.n_frames = j.at("n_frames").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& fj : j.at("frames")) {
      FrameManifest f;
      f.index = fj.at("index").get<int>();
      f.proposal_objects = fj.at("proposal_objects").get<std::vector<std::string>>();
      f.planted_hard_negatives = fj.at("planted_hard_negatives").get<std::vector<std::string>>();
      m.frames.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  return m;
}

Manifest generate(const SceneSpec& spec, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  const SceneRenderer scene(spec);
  for (const char* sub : {"frames", "flow", "proposals", "gt"}) fs::create_directories(out_dir / sub);

  const auto name = [](int t, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05d%s", t, ext);
    return std::string(buf);
  };

  Rng rng(splitmix(spec.seed ^ 0xde7ec7));
  const int J = spec.noise.jitter_px;
  Manifest manifest{spec.width, spec.height, spec.n_frames, spec.seed, {}};

  for (int t = 0; t < spec.n_frames; ++t) {
    write_pgm(out_dir / "frames" / name(t, ".pgm"), scene.frame(t));
    write_mask_pgm(out_dir / "gt" / name(t, ".pgm"), scene.visible_mask(scene.target_index(), t));
    if (t + 1 < spec.n_frames) write_flo(out_dir / "flow" / name(t, ".flo"), scene.flow(t));

    struct Record {
      InstanceProposal proposal;
      std::string object;
    };
    std::vector<Record> records;
    FrameManifest fm;
    fm.index = t;

    for (int i = 0; i < scene.object_count(); ++i) {
      const BinaryMask visible = scene.visible_mask(i, t);
      const std::size_t visible_px = visible.count();
      if (visible_px == 0) continue;
      const auto& o = scene.object(i);
      const BBox b = scene.object_box(i, t);
      const int jl = rng.uniform_int(-J, J), jt = rng.uniform_int(-J, J);
      const int jr = rng.uniform_int(-J, J), jb = rng.uniform_int(-J, J);
      const int bw = std::max(1, b.w + jl + jr), bh = std::max(1, b.h + jt + jb);
      BinaryMask m = render_shape(o.shape, b.x - jl, b.y - jt, bw, bh, spec.width, spec.height);
      for (int j = i + 1; j < scene.object_count(); ++j) m.subtract(scene.shape_mask(j, t));
      const double score = rng.uniform(spec.noise.score_min, spec.noise.score_max);
      if (m.none()) continue;
      const BBox box = bbox_of(m);
      records.push_back({InstanceProposal{std::move(m), box, score, o.category, 0}, scene.object_id(i)});
      if (o.is_static && 2 * visible_px >= scene.shape_mask(i, t).count()) {
        fm.planted_hard_negatives.push_back(scene.object_id(i));
      }
    }
    if (rng.chance(spec.noise.false_positive_rate)) {
      const int w = rng.uniform_int(12, std::min(32, spec.width));
      const int h = rng.uniform_int(12, std::min(32, spec.height));
      const int x = rng.uniform_int(0, spec.width - w);
      const int y = rng.uniform_int(0, spec.height - h);
      const double score = rng.uniform(0.3, spec.noise.score_max);
      BinaryMask m = mask_from_box(spec.width, spec.height, BBox{x, y, w, h});
      records.push_back({InstanceProposal{std::move(m), BBox{x, y, w, h}, score, rng.uniform_int(1, 5), 0},
                         "false_positive"});
    }
    // Fisher-Yates so file order carries no information about identity.
    for (std::size_t i = records.size(); i > 1; --i) {
      std::swap(records[i - 1], records[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
    }

    FrameProposals fp{t, {}, ProposalSource::instance};
    for (auto& r : records) {
      fm.proposal_objects.push_back(r.object);
      fp.proposals.push_back(std::move(r.proposal));
    }
    write_proposals(out_dir / "proposals" / name(t, ".jsonl"), fp);
    manifest.frames.push_back(std::move(fm));
  }

  const auto write_text = [](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << text;
  };
  write_text(out_dir / "scene.json", scene_to_json(spec));
  write_text(out_dir / "manifest.json", manifest_to_json(manifest));
  return manifest;
}

SelectionScore score_selection(const Manifest& manifest,
                               const std::map<int, std::vector<int>>& selected_records) {
  SelectionScore s;
  for (const auto& f : manifest.frames) {
    if (f.index < 1) continue;
    std::set<std::string> planted(f.planted_hard_negatives.begin(), f.planted_hard_negatives.end());
    std::set<std::string> found;
    if (auto it = selected_records.find(f.index); it != selected_records.end()) {
      for (int rec : it->second) {
        const bool known = rec >= 0 && rec < static_cast<int>(f.proposal_objects.size());
        const std::string id = known ? f.proposal_objects[static_cast<std::size_t>(rec)] : std::string();
        if (known && planted.count(id) && found.insert(id).second) {
          ++s.true_positives;
        } else {
          ++s.false_positives;
        }
      }
    }
    s.false_negatives += planted.size() - found.size();
  }
  const std::size_t selected = s.true_positives + s.false_positives;
  const std::size_t planted = s.true_positives + s.false_negatives;
  s.precision = selected == 0 ? 1.0 : static_cast<double>(s.true_positives) / static_cast<double>(selected);
  s.recall = planted == 0 ? 1.0 : static_cast<double>(s.true_positives) / static_cast<double>(planted);
  return s;
}

}  // namespace doa::synth
