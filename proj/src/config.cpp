#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "doa/error.hpp"
#include "doa/pipeline.hpp"

namespace doa {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class LineError {
 public:
  LineError(int line, std::string key) : prefix_("config line " + std::to_string(line) + " (" + std::move(key) + "): ") {}
  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(prefix_ + what); }

 private:
  std::string prefix_;
};

double to_double(std::string_view v, const LineError& err) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    err.fail("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view v, const LineError& err) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    err.fail("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view v, const LineError& err) {
  if (v == "true") return true;
  if (v == "false") return false;
  err.fail("expected true or false, got '" + std::string(v) + "'");
}

}  // namespace

void PipelineConfig::validate() const {
  selection.validate();
  const auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  unit(pgt_score_min, "pgt_score_min");
  unit(plan.lambda, "lambda");
  unit(plan.alpha, "alpha");
  unit(plan.first_frame_sample_prob, "first_frame_sample_prob");
  if (plan.iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(min_area_ratio >= 0.0 && min_area_ratio < 1.0)) {
    throw ConfigError("min_area_ratio must lie in [0, 1)");
  }
  if (eval.tol && *eval.tol < 0) throw ConfigError("eval.tol must be >= 0");
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const LineError err(line_no, key);
    if (value.empty()) err.fail("missing value");
    if (!seen.insert(key).second) err.fail("duplicate key");

    auto& s = cfg.selection;
    if (key == "T") s.pseudo_gt_threshold = to_double(value, err);
    else if (key == "T1") s.motion_overlap_max = to_double(value, err);
    else if (key == "T2") s.consistency_iou_min = to_double(value, err);
    else if (key == "k") s.history_frames = to_int(value, err);
    else if (key == "score_min") s.score_min = to_double(value, err);
    else if (key == "pgt_score_min") cfg.pgt_score_min = to_double(value, err);
    else if (key == "erosion_radius") s.erosion_radius = to_int(value, err);
    else if (key == "neg_distance") s.negative_distance = to_double(value, err);
    else if (key == "lambda") cfg.plan.lambda = to_double(value, err);
    else if (key == "alpha") cfg.plan.alpha = to_double(value, err);
    else if (key == "iterations") cfg.plan.iterations = to_int(value, err);
    else if (key == "first_frame_sample_prob") cfg.plan.first_frame_sample_prob = to_double(value, err);
    else if (key == "min_area_ratio") cfg.min_area_ratio = to_double(value, err);
    else if (key == "eval.enabled") cfg.eval.enabled = to_bool(value, err);
    else if (key == "eval.tol") cfg.eval.tol = to_int(value, err);
    else if (key == "eval.exclude_endpoints") cfg.eval.exclude_endpoints = to_bool(value, err);
    else err.fail("unknown key");
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace doa
