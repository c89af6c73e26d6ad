#include "jigsolve/cli.hpp"

#include <filesystem>
#include <memory>
#include <ostream>

#include "commands.hpp"
#include "common.hpp"
#include "jigsolve/errors.hpp"

namespace jigsolve::cli {

void add_selftest(CLI::App& app, Action& action) {
  auto opts = std::make_shared<SelftestOptions>();
  auto mutate = std::make_shared<std::string>();
  CLI::App* cmd = app.add_subcommand("selftest", "Check the solver against brute-force references");
  // Hidden: proves the suite notices a broken tie-break.
  cmd->add_option("--mutate", *mutate)->check(CLI::IsMember({"hungarian-tie-break"}))->group("");
  cmd->callback([opts, mutate, &action] {
    opts->mutate_tie_break = *mutate == "hungarian-tie-break";
    action = [opts](std::ostream& out, std::ostream&) { return run_selftest(*opts, out); };
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"jigsolve: jigsaw puzzle recovery by unary and binary costs over patch permutations", "jigsolve"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  Action action;
  add_gen(app, action);
  add_train(app, action);
  add_solve(app, action);
  add_bench(app, action);
  add_selftest(app, action);
  add_info(app, action);

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action(out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "invalid value: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace jigsolve::cli
