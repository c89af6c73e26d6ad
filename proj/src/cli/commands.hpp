#pragma once

#include <functional>
#include <iosfwd>

#include <CLI11.hpp>

namespace jigsolve::cli {

// Set by the chosen subcommand's parse callback and run after parsing.
using Action = std::function<int(std::ostream& out, std::ostream& err)>;

void add_gen(CLI::App& app, Action& action);
void add_train(CLI::App& app, Action& action);
void add_solve(CLI::App& app, Action& action);
void add_bench(CLI::App& app, Action& action);
void add_info(CLI::App& app, Action& action);
void add_selftest(CLI::App& app, Action& action);

// --threads, shared by the batch commands.
void add_threads_flag(CLI::App& cmd, int& threads);

}  // namespace jigsolve::cli
