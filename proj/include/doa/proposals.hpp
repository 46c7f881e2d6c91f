#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "doa/mask.hpp"

namespace doa {

struct InstanceProposal {
  BinaryMask mask;
  BBox box;  // re-tightened to bbox_of(mask) on load
  double score = 0.0;
  int category = 0;
  /// Line ordinal in the source file; survives filtering.
  int record_index = 0;
};

enum class ProposalSource { instance, semantic };

struct FrameProposals {
  int frame_index = 0;
  std::vector<InstanceProposal> proposals;
  ProposalSource source = ProposalSource::instance;
};

inline constexpr double kDefaultScoreMin = 0.8;
inline constexpr int kForegroundCategory = 1;

/// One JSON object per line:
///   {"category": int, "score": float, "bbox": [x,y,w,h], "rle": [...],
///    "width": int, "height": int}
/// Blank lines are ignored. Throws FormatError on malformed records and
/// DimensionError when records disagree on frame size.
FrameProposals parse_proposals(const std::filesystem::path& path, int frame_index,
                               ProposalSource source = ProposalSource::instance);
FrameProposals parse_proposals_text(std::string_view text, int frame_index,
                                    ProposalSource source = ProposalSource::instance);

std::string serialize_proposals(const FrameProposals& fp);
void write_proposals(const std::filesystem::path& path, const FrameProposals& fp);

/// Keeps proposals with score >= score_min, in order.
FrameProposals filter_by_score(const FrameProposals& fp, double score_min);

/// Semantic masks are preferred when available and no category repeats among
/// the (already filtered) first-frame instances.
ProposalSource select_source(const FrameProposals& first_frame_instances, bool semantic_available);

/// Collapses every category id onto kForegroundCategory.
FrameProposals to_class_agnostic(FrameProposals fp);

}  // namespace doa
