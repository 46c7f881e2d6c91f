// doa: pseudo-GT fusion, distractor-aware label selection and evaluation for
// video object segmentation sequences.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "doa/error.hpp"
#include "doa/metrics.hpp"
#include "doa/pipeline.hpp"
#include "doa/simd.hpp"
#include "doa/synth.hpp"

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw doa::FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "doa: " << kind << ": " << e.what() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distractor-aware online adaptation: label selection and evaluation"};
  app.require_subcommand(1);

  std::filesystem::path config_path, sequence_dir, out_dir;
  bool force_eval = false;
  auto* run = app.add_subcommand("run", "Run pseudo-GT, per-frame selection and plan emission on a sequence");
  run->add_option("--config", config_path, "key = value config file (defaults when omitted)");
  run->add_option("--sequence", sequence_dir, "Sequence directory")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--eval", force_eval, "Write metrics.json even if eval.enabled = false");

  std::filesystem::path spec_path, synth_out;
  std::optional<std::uint64_t> standard_seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
  auto* spec_opt = synth->add_option("--spec", spec_path, "Scene spec JSON");
  synth->add_option("--standard", standard_seed, "Use the standard distractor scene with this seed")
      ->excludes(spec_opt);
  synth->add_option("--out", synth_out, "Output directory")->required();

  std::filesystem::path pred_dir, gt_dir, metrics_out;
  std::optional<int> tol;
  bool keep_endpoints = false;
  std::string seq_name = "sequence";
  auto* eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
  eval->add_option("--pred", pred_dir, "Directory of <index>.pgm predictions")->required();
  eval->add_option("--gt", gt_dir, "Directory of <index>.pgm ground truth")->required();
  eval->add_option("--out", metrics_out, "metrics.json path")->required();
  eval->add_option("--tol", tol, "Boundary tolerance in pixels");
  eval->add_flag("--no-exclude-endpoints", keep_endpoints, "Include first and last frame in the means");
  eval->add_option("--name", seq_name, "Sequence name recorded in the report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      doa::PipelineConfig cfg = config_path.empty() ? doa::PipelineConfig{} : doa::load_config(config_path);
      if (force_eval) cfg.eval.enabled = true;
      const auto layout = doa::SequenceLayout::discover(sequence_dir);
      const auto summary = doa::run_sequence(layout, cfg, out_dir);
      std::cout << "frames " << summary.frames << ", one_shot " << summary.one_shot_frames << ", simd "
                << doa::simd::name(doa::simd::active().isa) << '\n';
      if (summary.metrics) {
        std::cout << "J " << summary.metrics->j_mean << "  F " << summary.metrics->f_mean << '\n';
      }
    } else if (*synth) {
      if (!standard_seed && spec_path.empty()) throw doa::ConfigError("synth needs --spec or --standard");
      const doa::synth::SceneSpec spec = standard_seed ? doa::synth::standard_distractor_scene(*standard_seed)
                                                       : doa::synth::scene_from_json(read_text(spec_path));
      const auto manifest = doa::synth::generate(spec, synth_out);
      std::cout << "wrote " << manifest.n_frames << " frames to " << synth_out.string() << '\n';
    } else if (*eval) {
      const doa::EvalOptions opts{tol, !keep_endpoints};
      const auto rep = doa::evaluate_directories(pred_dir, gt_dir, opts, seq_name);
      std::ofstream out(metrics_out, std::ios::binary | std::ios::trunc);
      if (!out) throw doa::Error("cannot write " + metrics_out.string());
      out << doa::metrics_json(rep);
      std::cout << "J " << rep.j_mean << "  F " << rep.f_mean << '\n';
    }
  } catch (const doa::NoForegroundFound& e) {
    return report("no foreground", e, 2);
  } catch (const doa::FormatError& e) {
    return report("format error", e, 3);
  } catch (const doa::DimensionError& e) {
    return report("dimension mismatch", e, 4);
  } catch (const std::exception& e) {
    return report("error", e, 1);
  }
  return 0;
}
