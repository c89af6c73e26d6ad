#include <filesystem>
#include <memory>
#include <ostream>

#include "commands.hpp"
#include "common.hpp"
#include "jigsolve/cli.hpp"
#include "jigsolve/errors.hpp"
#include "jigsolve/puzzlegen.hpp"
#include "runner.hpp"

namespace jigsolve::cli {

namespace {

// Keeps the image stream apart from the layout stream of the same instance.
constexpr std::uint64_t kImageSalt = 0x696d616765ULL;

struct GenArgs {
  std::string kind = "synth-mixed";
  std::vector<std::string> images;
  std::string grid = "3x3";
  std::size_t count = 100;
  std::uint64_t seed = 1;
  std::string out = "corpus";
  int image_size = 256;
  int cell = 85;
  int crop = 64;
  bool no_jitter = false;
  double mirror_p = 0.5;
  std::string mean = "patch";
  bool no_scramble = false;
  std::string volume_kind = "synth-mixed";
  int volume_size = 128;
  int threads = 0;
};

SynthKind synth_kind(const std::string& flag, const std::string& value) {
  if (value.rfind("synth-", 0) != 0) throw UsageError(flag + " must be synth-gradient, synth-blobs or synth-mixed");
  return parse_synth_kind(value.substr(6));
}

int run_gen(const GenArgs& a, std::ostream& out) {
  const GridShape shape = GridShape::parse(a.grid);
  const MeanMode mean = parse_mean_mode(a.mean);
  if (a.count == 0) throw UsageError("--count must be positive");
  const std::filesystem::path root = a.out;
  std::filesystem::create_directories(root);

  Manifest index{{"format", "jigsolve-corpus-1"},
                 {"grid", shape.to_string()},
                 {"count", std::to_string(a.count)},
                 {"seed", std::to_string(a.seed)},
                 {"mean", mean_mode_name(mean)},
                 {"jitter", a.no_jitter ? "0" : "1"},
                 {"scramble", a.no_scramble ? "0" : "1"}};

  std::function<PuzzleInstance(std::size_t)> make;
  if (shape.is_2d()) {
    const bool from_files = a.kind == "image";
    if (from_files && a.images.empty()) throw UsageError("--kind image needs at least one --image");
    const SynthKind kind = from_files ? SynthKind::kMixed : synth_kind("--kind", a.kind);
    if (!from_files && a.image_size < 16) throw UsageError("--image-size must be at least 16");
    index["kind"] = a.kind;
    index["cell"] = std::to_string(a.cell);
    index["crop"] = std::to_string(a.crop);
    index["mirror_p"] = std::to_string(a.mirror_p);
    make = [&a, shape, mean, from_files, kind](std::size_t i) {
      PuzzleOptions opts;
      opts.cell = a.cell;
      opts.crop = a.crop;
      opts.jitter = !a.no_jitter;
      opts.mirror_p = a.mirror_p;
      opts.mean_mode = mean;
      opts.scramble = !a.no_scramble;
      ImageTensor img;
      if (from_files) {
        opts.source = a.images[i % a.images.size()];
        img = load_image(opts.source);
      } else {
        const std::uint64_t image_seed = (a.seed ^ kImageSalt) + i;
        img = synth_image(kind, a.image_size, image_seed);
        opts.source = "synth:" + std::string(synth_kind_name(kind)) + ":" + std::to_string(a.image_size) + ":" +
                      std::to_string(image_seed);
      }
      return make_puzzle_2d(img, shape.extent(0), shape.extent(1), a.seed + i, opts);
    };
  } else {
    const int per_axis = shape.extent(0);
    if (shape.extent(1) != per_axis || shape.extent(2) != per_axis || (per_axis != 2 && per_axis != 3)) {
      throw UsageError("3D grids must be 2x2x2 or 3x3x3");
    }
    const SynthKind kind = synth_kind("--volume-kind", a.volume_kind);
    index["kind"] = a.volume_kind;
    index["volume_size"] = std::to_string(a.volume_size);
    make = [&a, per_axis, mean, kind](std::size_t i) {
      Puzzle3dOptions opts;
      opts.jitter = !a.no_jitter;
      opts.mean_mode = mean;
      opts.scramble = !a.no_scramble;
      const std::uint64_t image_seed = (a.seed ^ kImageSalt) + i;
      opts.source = "synth-volume:" + std::string(synth_kind_name(kind)) + ":" + std::to_string(a.volume_size) + ":" +
                    std::to_string(image_seed);
      return make_puzzle_3d(synth_volume(kind, a.volume_size, image_seed), per_axis, a.seed + i, opts);
    };
  }

  parallel_for(0, a.count, resolve_threads(a.threads),
               [&](std::size_t i) { save_puzzle(make(i), instance_dir(root, i)); });
  write_manifest(corpus_index_path(root), index);
  out << "wrote " << a.count << " " << shape.to_string() << " puzzles to " << root.string() << '\n';
  return kExitOk;
}

}  // namespace

void add_threads_flag(CLI::App& cmd, int& threads) {
  cmd.add_option("--threads", threads, "Worker threads (0: $JIGSOLVE_THREADS or 1)")->check(CLI::NonNegativeNumber);
}

void add_gen(CLI::App& app, Action& action) {
  auto a = std::make_shared<GenArgs>();
  CLI::App* cmd = app.add_subcommand("gen", "Generate a puzzle corpus");
  cmd->add_option("--kind", a->kind, "2D source: synth-gradient, synth-blobs, synth-mixed or image");
  cmd->add_option("--image", a->images, "Source image (PGM/PPM/RTEN) for --kind image; repeatable");
  cmd->add_option("--grid", a->grid, "Grid WxH or WxHxZ");
  cmd->add_option("--count", a->count, "Number of instances");
  cmd->add_option("--seed", a->seed, "Base seed; instance i uses seed + i");
  cmd->add_option("--out", a->out, "Corpus directory");
  cmd->add_option("--image-size", a->image_size, "Edge length of synthetic 2D images");
  cmd->add_option("--cell", a->cell, "Cell edge after resizing");
  cmd->add_option("--crop", a->crop, "Patch edge");
  cmd->add_flag("--no-jitter", a->no_jitter, "Center crops instead of random offsets");
  cmd->add_option("--mirror-p", a->mirror_p, "Probability of flipping a patch horizontally")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--mean", a->mean, "Mean subtraction: patch, global or none");
  cmd->add_flag("--no-scramble", a->no_scramble, "Keep patches in their original slots");
  cmd->add_option("--volume-kind", a->volume_kind, "3D source: synth-gradient, synth-blobs or synth-mixed");
  cmd->add_option("--volume-size", a->volume_size, "Edge length of synthetic volumes (>= 120)");
  add_threads_flag(*cmd, a->threads);
  cmd->callback([a, &action] { action = [a](std::ostream& out, std::ostream&) { return run_gen(*a, out); }; });
}

}  // namespace jigsolve::cli
