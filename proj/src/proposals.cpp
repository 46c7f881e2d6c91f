#include "doa/proposals.hpp"

#include <fstream>
#include <iterator>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "doa/error.hpp"

namespace doa {
namespace {

using nlohmann::json;

int require_int(const json& obj, const char* key, int line) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw FormatError("proposal line " + std::to_string(line) + ": '" + key +
                      "' must be an integer");
  }
  return obj[key].get<int>();
}

InstanceProposal parse_record(const json& rec, int line, std::optional<std::pair<int, int>>& dims) {
  const auto bad = [line](const std::string& what) {
    return FormatError("proposal line " + std::to_string(line) + ": " + what);
  };
  if (!rec.is_object()) throw bad("record is not a JSON object");
  const int category = require_int(rec, "category", line);
  const int width = require_int(rec, "width", line);
  const int height = require_int(rec, "height", line);
  if (width < 1 || height < 1) throw bad("width/height must be >= 1");
  if (!rec.contains("score") || !rec["score"].is_number()) throw bad("'score' must be a number");
  const double score = rec["score"].get<double>();
  if (!(score >= 0.0 && score <= 1.0)) throw bad("score " + std::to_string(score) + " outside [0,1]");

  if (!rec.contains("bbox") || !rec["bbox"].is_array() || rec["bbox"].size() != 4) {
    throw bad("'bbox' must be [x,y,w,h]");
  }
  for (const auto& v : rec["bbox"]) {
    if (!v.is_number_integer()) throw bad("'bbox' entries must be integers");
  }

  if (!rec.contains("rle") || !rec["rle"].is_array()) throw bad("'rle' must be an array");
  std::vector<std::uint32_t> counts;
  counts.reserve(rec["rle"].size());
  for (const auto& v : rec["rle"]) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 0xffffffffLL) {
      throw bad("'rle' entries must be non-negative integers");
    }
    counts.push_back(v.get<std::uint32_t>());
  }

  if (dims && (dims->first != width || dims->second != height)) {
    throw DimensionError("proposal line " + std::to_string(line) + ": frame size " +
                         std::to_string(width) + "x" + std::to_string(height) +
                         " differs from earlier records");
  }
  dims = std::make_pair(width, height);

  BinaryMask mask = [&] {
    try {
      return rle_decode(counts, width, height);
    } catch (const FormatError& e) {
      throw bad(e.what());
    }
  }();
  if (mask.none()) throw bad("empty mask");
  const BBox box = bbox_of(mask);
  return InstanceProposal{std::move(mask), box, score, category, 0};
}

}  // namespace

FrameProposals parse_proposals_text(std::string_view text, int frame_index, ProposalSource source) {
  FrameProposals fp{frame_index, {}, source};
  std::optional<std::pair<int, int>> dims;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0, record = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("proposal line " + std::to_string(line_no) + ": " + e.what());
    }
    InstanceProposal p = parse_record(rec, line_no, dims);
    p.record_index = record++;
    fp.proposals.push_back(std::move(p));
  }
  return fp;
}

FrameProposals parse_proposals(const std::filesystem::path& path, int frame_index,
                               ProposalSource source) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_proposals_text(text, frame_index, source);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string serialize_proposals(const FrameProposals& fp) {
  std::string out;
  for (const auto& p : fp.proposals) {
    json rec;
    rec["category"] = p.category;
    rec["score"] = p.score;
    rec["bbox"] = {p.box.x, p.box.y, p.box.w, p.box.h};
    rec["rle"] = rle_encode(p.mask);
    rec["width"] = p.mask.width();
    rec["height"] = p.mask.height();
    out += rec.dump();
    out += '\n';
  }
  return out;
}

void write_proposals(const std::filesystem::path& path, const FrameProposals& fp) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << serialize_proposals(fp);
}

FrameProposals filter_by_score(const FrameProposals& fp, double score_min) {
  FrameProposals out{fp.frame_index, {}, fp.source};
  for (const auto& p : fp.proposals) {
    if (p.score >= score_min) out.proposals.push_back(p);
  }
  return out;
}

ProposalSource select_source(const FrameProposals& first_frame_instances, bool semantic_available) {
  if (!semantic_available) return ProposalSource::instance;
  std::set<int> seen;
  for (const auto& p : first_frame_instances.proposals) {
    if (!seen.insert(p.category).second) return ProposalSource::instance;
  }
  return ProposalSource::semantic;
}

FrameProposals to_class_agnostic(FrameProposals fp) {
  for (auto& p : fp.proposals) p.category = kForegroundCategory;
  return fp;
}

}  // namespace doa
