#include "doa/pseudo_gt.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "doa/error.hpp"
#include "doa/pnm.hpp"

namespace doa {

PseudoGroundTruth generate_pseudo_gt(const FrameProposals& fp, const MotionMask& motion,
                                     double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("pseudo-GT threshold must lie in [0, 1)");
  }
  PseudoGroundTruth out{BinaryMask(motion.mask.width(), motion.mask.height()), {}, threshold};
  for (std::size_t i = 0; i < fp.proposals.size(); ++i) {
    const auto& p = fp.proposals[i];
    if (overlap_ratio(p.mask, motion.mask) > threshold) {
      out.mask |= p.mask;
      out.selected_indices.push_back(static_cast<int>(i));
    }
  }
  if (out.selected_indices.empty()) throw NoForegroundFound(fp.frame_index);
  return out;
}

void write_pseudo_gt(const PseudoGroundTruth& pgt, const std::filesystem::path& pgm_path,
                     const std::filesystem::path& sidecar_path) {
  write_mask_pgm(pgm_path, pgt.mask);
  nlohmann::ordered_json side;
  side["selected_indices"] = pgt.selected_indices;
  side["T"] = pgt.threshold;
  std::ofstream out(sidecar_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + sidecar_path.string());
  out << side.dump(2) << '\n';
}

}  // namespace doa
