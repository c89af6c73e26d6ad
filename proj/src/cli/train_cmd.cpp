#include <iomanip>
#include <memory>
#include <ostream>

#include "commands.hpp"
#include "common.hpp"
#include "jigsolve/cli.hpp"
#include "jigsolve/errors.hpp"
#include "jigsolve/train.hpp"
#include "runner.hpp"

namespace jigsolve::cli {

namespace {

struct TrainArgs {
  std::string corpus = "corpus";
  std::string out = "model.jsw";
  std::string log = "train_log.jsonl";
  std::string grid;
  TrainOptions opts;
  bool no_binary = false;
  int threads = 0;
};

int run_train(TrainArgs& a, std::ostream& out) {
  a.opts.solver.use_binary = !a.no_binary;
  a.opts.validate();
  const PuzzleSet set = PuzzleSet::from_corpus(a.corpus);
  if (!a.grid.empty() && GridShape::parse(a.grid) != set.shape) {
    throw ConfigError("--grid " + a.grid + " does not match corpus grid " + set.shape.to_string());
  }
  std::vector<PuzzleInstance> corpus(set.count);
  parallel_for(0, set.count, resolve_threads(a.threads), [&](std::size_t i) { corpus[i] = set.load(i, true); });

  ReportWriter log(a.log);
  const auto& patch = corpus.front().patches.front();
  const FeatureRecipe recipe = recipe_for(patch);
  log.write(Json{{"type", "config"},
                 {"corpus", a.corpus},
                 {"grid", set.shape.to_string()},
                 {"count", set.count},
                 {"feature_dim", feature_dim(recipe, patch.channels)},
                 {"learning_rate", a.opts.learning_rate},
                 {"batch_size", a.opts.batch_size},
                 {"epochs", a.opts.epochs},
                 {"train_rounds", a.opts.train_rounds},
                 {"seed", a.opts.seed},
                 {"weight_init_scale", a.opts.weight_init_scale},
                 {"radius", a.opts.solver.radius},
                 {"use_binary", a.opts.solver.use_binary}});

  const LinearScorer model = train_sgd(corpus, a.opts, [&](const EpochStats& e) {
    log.write(Json{{"type", "epoch"},
                   {"epoch", e.epoch},
                   {"mean_loss", e.mean_loss},
                   {"mean_rounds", e.mean_rounds},
                   {"solved_fraction", e.solved_fraction},
                   {"train_rounds", a.opts.train_rounds}});
    out << "epoch " << e.epoch << "  loss " << std::fixed << std::setprecision(4) << e.mean_loss << "  rounds "
        << std::setprecision(2) << e.mean_rounds << "  solved " << e.solved_fraction << '\n'
        << std::defaultfloat;
  });
  save_model(model, a.out);
  log.write(Json{{"type", "model"}, {"path", a.out}, {"parameters", model.param_count()}});
  out << "saved " << a.out << " (" << model.param_count() << " parameters)\n";
  return kExitOk;
}

}  // namespace

void add_train(CLI::App& app, Action& action) {
  auto a = std::make_shared<TrainArgs>();
  CLI::App* cmd = app.add_subcommand("train", "Train a linear scorer on a corpus");
  cmd->add_option("--corpus", a->corpus, "Corpus directory written by gen");
  cmd->add_option("--out", a->out, "Model file");
  cmd->add_option("--log", a->log, "Epoch log (one JSON record per line)");
  cmd->add_option("--grid", a->grid, "Expected grid; empty accepts the corpus grid");
  cmd->add_option("--lr", a->opts.learning_rate, "Learning rate");
  cmd->add_option("--batch-size", a->opts.batch_size, "Mini-batch size");
  cmd->add_option("--epochs", a->opts.epochs, "Passes over the corpus");
  cmd->add_option("--train-rounds", a->opts.train_rounds, "Reorganization rounds per sample");
  cmd->add_option("--seed", a->opts.seed, "Initialization and shuffling seed");
  cmd->add_option("--init-scale", a->opts.weight_init_scale, "Initial weights are uniform in [-s, s]");
  cmd->add_option("--radius", a->opts.solver.radius, "Hamming radius of in-loop predictions");
  cmd->add_flag("--no-binary", a->no_binary, "Unary-only in-loop predictions");
  add_threads_flag(*cmd, a->threads);
  cmd->callback([a, &action] { action = [a](std::ostream& out, std::ostream&) { return run_train(*a, out); }; });
}

}  // namespace jigsolve::cli
