#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <json.hpp>

#include "doa/error.hpp"
#include "doa/flow.hpp"
#include "doa/pipeline.hpp"
#include "doa/synth.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(DOA_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path make_sequence(const std::string& name, std::uint64_t seed = 1) {
  const fs::path dir = oracle::scratch_dir(name);
  doa::synth::generate(doa::synth::standard_distractor_scene(seed), dir);
  return dir;
}

TEST(Config, EmptyFileGivesDefaults) {
  const auto cfg = doa::parse_config("");
  EXPECT_EQ(cfg, doa::PipelineConfig{});
  EXPECT_EQ(cfg.selection.motion_overlap_max, 0.2);
  EXPECT_EQ(cfg.selection.consistency_iou_min, 0.7);
  EXPECT_EQ(cfg.selection.history_frames, 3);
  EXPECT_EQ(cfg.selection.score_min, 0.8);
  EXPECT_EQ(cfg.plan.lambda, 0.8);
  EXPECT_EQ(cfg.plan.alpha, 0.95);
}

TEST(Config, ExplicitDefaultEqualsDefault) {
  EXPECT_EQ(doa::parse_config("k = 3\n"), doa::PipelineConfig{});
  EXPECT_EQ(doa::parse_config("# comment only\n\n  T1 = 0.2   # trailing\n"), doa::PipelineConfig{});
}

TEST(Config, ParsesEveryKey) {
  const auto cfg = doa::parse_config(
      "T = 0.4\nT1 = 0.1\nT2 = 0.6\nk = 2\nscore_min = 0.5\npgt_score_min = 0.7\n"
      "erosion_radius = 3\nneg_distance = 12.5\nlambda = 0.5\nalpha = 0.9\niterations = 4\n"
      "first_frame_sample_prob = 0.8\nmin_area_ratio = 0.01\neval.enabled = false\neval.tol = 2\n"
      "eval.exclude_endpoints = false\n");
  EXPECT_EQ(cfg.selection.pseudo_gt_threshold, 0.4);
  EXPECT_EQ(cfg.selection.history_frames, 2);
  EXPECT_EQ(cfg.selection.negative_distance, 12.5);
  EXPECT_EQ(cfg.pgt_score_min, 0.7);
  EXPECT_EQ(cfg.plan.iterations, 4);
  EXPECT_FALSE(cfg.eval.enabled);
  EXPECT_EQ(cfg.eval.tol, 2);
  EXPECT_FALSE(cfg.eval.exclude_endpoints);
}

TEST(Config, Rejections) {
  for (const char* bad : {"T1 = 1.5", "colour = red", "k = 0", "k = 2.5", "alpha = x", "T = 1",
                          "eval.enabled = yes", "lambda", "T1 = 0.1\nT1 = 0.2", "neg_distance = -1"}) {
    EXPECT_THROW(doa::parse_config(bad), doa::ConfigError) << bad;
  }
  EXPECT_THROW(doa::load_config("/nonexistent/doa.toml"), doa::FormatError);
}

TEST(Layout, MissingFlowIsFormatError) {
  const fs::path dir = make_sequence("layout_noflow");
  fs::remove_all(dir / "flow");
  EXPECT_THROW(doa::SequenceLayout::discover(dir), doa::FormatError);
  const fs::path out = oracle::scratch_dir("layout_noflow_out");
  EXPECT_EQ(run_cli("run --sequence " + dir.string() + " --out " + out.string(), out / "log"), 3);
  EXPECT_NE(oracle::slurp(out / "log").find("flow/"), std::string::npos);
}

TEST(Layout, GapInFramesIsFormatError) {
  const fs::path dir = make_sequence("layout_gap");
  fs::remove(dir / "frames/00004.pgm");
  EXPECT_THROW(doa::SequenceLayout::discover(dir), doa::FormatError);
}

TEST(Pipeline, ArtifactsOnStandardScene) {
  const fs::path seq = make_sequence("pipe_seq");
  const fs::path out = oracle::scratch_dir("pipe_out");
  const auto layout = doa::SequenceLayout::discover(seq);
  EXPECT_TRUE(layout.has_gt);
  EXPECT_FALSE(layout.has_predictions);
  int traced = 0;
  const auto summary = doa::run_sequence(layout, {}, out, [&](const doa::FrameTrace& tr) {
    ++traced;
    EXPECT_TRUE(doa::is_subset(tr.positives.mask, tr.prev_prediction));
  });
  EXPECT_EQ(traced, 9);
  EXPECT_EQ(summary.frames, 10);
  for (const char* f : {"pseudo_gt.pgm", "pseudo_gt.json", "plan.json", "selection.json", "motion/00000.pgm",
                        "labels/00001.pgm", "labels/00001.json", "overlays/00009.ppm"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_FALSE(fs::exists(out / "metrics.json"));
  const auto plan = doa::parse_plan(oracle::slurp(out / "plan.json"));
  ASSERT_EQ(plan.frames.size(), 9u);
  for (std::size_t i = 0; i < plan.frames.size(); ++i) EXPECT_EQ(plan.frames[i].frame_index, static_cast<int>(i) + 1);
  // The pseudo-GT lands on the target.
  const auto pgt = doa::read_mask_pgm(out / "pseudo_gt.pgm");
  EXPECT_GT(doa::iou(pgt, doa::read_mask_pgm(seq / "gt/00000.pgm")), 0.8);
}

TEST(Pipeline, RerunIsByteIdentical) {
  const fs::path seq = make_sequence("idem_seq", 2);
  const fs::path out = oracle::scratch_dir("idem_out");
  const auto layout = doa::SequenceLayout::discover(seq);
  doa::run_sequence(layout, {}, out);
  const auto first = oracle::tree_hash(out);
  doa::run_sequence(layout, {}, out);
  EXPECT_EQ(oracle::tree_hash(out), first);
}

TEST(Pipeline, MetricsWrittenWhenPredictionsExist) {
  const fs::path seq = make_sequence("metrics_seq", 3);
  fs::copy(seq / "gt", seq / "predictions");
  const fs::path out = oracle::scratch_dir("metrics_out");
  const auto summary = doa::run_sequence(doa::SequenceLayout::discover(seq), {}, out);
  ASSERT_TRUE(fs::exists(out / "metrics.json"));
  ASSERT_TRUE(summary.metrics.has_value());
  EXPECT_EQ(summary.metrics->j_mean, 1.0);
  EXPECT_EQ(summary.metrics->f_mean, 1.0);

  doa::PipelineConfig off;
  off.eval.enabled = false;
  const fs::path out2 = oracle::scratch_dir("metrics_out_off");
  doa::run_sequence(doa::SequenceLayout::discover(seq), off, out2);
  EXPECT_FALSE(fs::exists(out2 / "metrics.json"));
}

// Later inputs are swapped for garbage; labels up to the cut must not move.
TEST(Pipeline, NoLookahead) {
  const fs::path seq = make_sequence("look_seq", 4);
  fs::copy(seq / "gt", seq / "predictions");
  const fs::path out_a = oracle::scratch_dir("look_a");
  doa::run_sequence(doa::SequenceLayout::discover(seq), {}, out_a);

  const int cut = 5;
  oracle::Gen gen(71);
  const auto manifest = doa::synth::manifest_from_json(oracle::slurp(seq / "manifest.json"));
  for (int t = cut + 1; t < manifest.n_frames; ++t) {
    const std::string stem = doa::frame_stem(t);
    doa::write_pgm(seq / "frames" / (stem + ".pgm"), gen.texture(manifest.width, manifest.height));
    oracle::spit(seq / "proposals" / (stem + ".jsonl"), "");
    if (t + 1 < manifest.n_frames) {
      doa::FlowField f(manifest.width, manifest.height);
      for (int y = 0; y < manifest.height; ++y)
        for (int x = 0; x < manifest.width; ++x) f.set(x, y, static_cast<float>(gen.uniform(-3, 3)), 0.0f);
      doa::write_flo(seq / "flow" / (stem + ".flo"), f);
    }
  }
  for (int t = cut; t < manifest.n_frames; ++t) {
    doa::write_mask_pgm(seq / "predictions" / (doa::frame_stem(t) + ".pgm"), gen.mask(manifest.width, manifest.height));
  }
  const fs::path out_b = oracle::scratch_dir("look_b");
  doa::run_sequence(doa::SequenceLayout::discover(seq), {}, out_b);
  for (int t = 1; t <= cut; ++t) {
    const std::string stem = doa::frame_stem(t);
    EXPECT_EQ(oracle::slurp(out_a / "labels" / (stem + ".pgm")), oracle::slurp(out_b / "labels" / (stem + ".pgm")))
        << "frame " << t;
    EXPECT_EQ(oracle::slurp(out_a / "labels" / (stem + ".json")), oracle::slurp(out_b / "labels" / (stem + ".json")));
  }
  EXPECT_NE(oracle::slurp(out_a / "labels/00009.pgm"), oracle::slurp(out_b / "labels/00009.pgm"));
}

TEST(Cli, ExitCodes) {
  const fs::path seq = make_sequence("cli_seq", 5);
  const fs::path out = oracle::scratch_dir("cli_out");
  EXPECT_EQ(run_cli("run --sequence " + seq.string() + " --out " + (out / "ok").string(), out / "log0"), 0);

  // No first-frame proposal: nothing can seed the pseudo-GT.
  const fs::path empty = make_sequence("cli_empty", 5);
  oracle::spit(empty / "proposals/00000.jsonl", "");
  EXPECT_EQ(run_cli("run --sequence " + empty.string() + " --out " + (out / "e").string(), out / "log2"), 2);
  EXPECT_NE(oracle::slurp(out / "log2").find("frame 0"), std::string::npos);

  const fs::path bad_cfg = out / "bad.toml";
  oracle::spit(bad_cfg, "T1 = 1.5\n");
  EXPECT_EQ(run_cli("run --config " + bad_cfg.string() + " --sequence " + seq.string() + " --out " +
                        (out / "c").string(),
                    out / "log3"),
            3);

  const fs::path small = make_sequence("cli_small", 5);
  oracle::Gen gen(3);
  doa::write_pgm(small / "frames/00003.pgm", gen.texture(40, 40));
  EXPECT_EQ(run_cli("run --sequence " + small.string() + " --out " + (out / "d").string(), out / "log4"), 4);
}

TEST(Cli, SynthAndEval) {
  const fs::path out = oracle::scratch_dir("cli_synth");
  const fs::path spec = out / "scene.json";
  oracle::spit(spec, doa::synth::scene_to_json(doa::synth::standard_distractor_scene(8)));
  ASSERT_EQ(run_cli("synth --spec " + spec.string() + " --out " + (out / "a").string(), out / "log"), 0);
  ASSERT_EQ(run_cli("synth --standard 8 --out " + (out / "b").string(), out / "log"), 0);
  EXPECT_EQ(oracle::tree_hash(out / "a"), oracle::tree_hash(out / "b"));
  ASSERT_EQ(run_cli("eval --pred " + (out / "a/gt").string() + " --gt " + (out / "a/gt").string() + " --out " +
                        (out / "m.json").string(),
                    out / "log"),
            0);
  const auto doc = nlohmann::json::parse(oracle::slurp(out / "m.json"));
  EXPECT_EQ(doc["j_mean"], 1.0);
  EXPECT_EQ(run_cli("synth --out " + (out / "c").string(), out / "log"), 3);
}

}  // namespace
