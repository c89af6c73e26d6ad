#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jigsolve/cli.hpp"
#include "jigsolve/image.hpp"
#include "jigsolve/puzzle.hpp"

namespace fs = std::filesystem;
using jigsolve::cli::run;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result jig(std::vector<std::string> args) {
  args.insert(args.begin(), "jigsolve");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& leaf) const { return (path_ / leaf).string(); }

 private:
  fs::path path_;
};

std::vector<Json> records(const std::string& path) {
  std::ifstream in(path);
  std::vector<Json> out;
  for (std::string line; std::getline(in, line);) out.push_back(Json::parse(line));
  return out;
}

Json aggregate(const std::string& path) { return records(path).back(); }

std::string slurp(const std::string& path) {
  const auto b = jigsolve::read_file(path);
  return {b.begin(), b.end()};
}

}  // namespace

TEST_CASE("help and flag checking") {
  const auto help = jig({"solve", "--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("--radius INT [3]") != std::string::npos);
  CHECK(help.out.find("--max-rounds INT [20]") != std::string::npos);
  CHECK(jig({"gen", "--help"}).out.find("--cell INT [85]") != std::string::npos);
  CHECK(jig({"solve", "--no-such-flag"}).code == jigsolve::cli::kExitUsage);
  CHECK(jig({}).code == jigsolve::cli::kExitUsage);
  CHECK(jig({"solve", "--grid", "3x3"}).code == jigsolve::cli::kExitUsage);  // no scorer
}

TEST_CASE("gen is idempotent and solve with a perfect oracle is exact") {
  TempDir t("jigsolve_cli_gen");
  const std::vector<std::string> gen{"gen", "--grid", "2x2", "--count", "6", "--seed", "7", "--image-size", "64"};
  auto a = gen, b = gen;
  a.insert(a.end(), {"--out", t / "a"});
  b.insert(b.end(), {"--out", t / "b", "--threads", "3"});
  REQUIRE(jig(a).code == 0);
  REQUIRE(jig(a).code == 0);
  REQUIRE(jig(b).code == 0);
  for (const auto& entry : fs::recursive_directory_iterator(t / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), t / "a");
    REQUIRE(slurp(entry.path().string()) == slurp((fs::path(t / "b") / rel).string()));
  }

  REQUIRE(jig({"solve", "--corpus", t / "a", "--oracle", "0", "--report", t / "r.jsonl"}).code == 0);
  const auto recs = records(t / "r.jsonl");
  CHECK(recs.size() == 7);
  CHECK(recs.back()["exact_rate"] == 1.0);
  CHECK(recs.front()["type"] == "puzzle");
}

TEST_CASE("3D corpora") {
  TempDir t("jigsolve_cli_3d");
  REQUIRE(jig({"gen", "--grid", "3x3x3", "--volume-kind", "synth-mixed", "--count", "2", "--out", t / "c"}).code == 0);
  const auto p = jigsolve::load_puzzle(fs::path(t / "c") / "000000");
  CHECK(p.patches.size() == 27);
  CHECK(p.patches[0].dims == std::vector<int>{32, 32, 32});
  const auto s = jig({"solve", "--corpus", t / "c", "--oracle", "0", "--report", t / "r.jsonl"});
  CHECK(s.out.find("binary terms disabled") != std::string::npos);
  CHECK(aggregate(t / "r.jsonl")["binary_disabled"] == true);
  CHECK(aggregate(t / "r.jsonl")["configuration_space"]["exact"] == "10888869450418352160768000000");
}

TEST_CASE("train") {
  TempDir t("jigsolve_cli_train");
  const auto missing = jig({"train", "--corpus", t / "nothing-here"});
  CHECK(missing.code != 0);
  CHECK(missing.err.find("nothing-here") != std::string::npos);

  REQUIRE(jig({"gen", "--grid", "2x2", "--count", "40", "--image-size", "64", "--mirror-p", "0", "--mean", "global",
               "--out", t / "c"})
              .code == 0);
  CHECK(jig({"train", "--corpus", t / "c", "--grid", "3x3", "--out", t / "m"}).code == jigsolve::cli::kExitUsage);
  for (const char* rounds : {"1", "5"}) {
    const std::string model = t / (std::string("m") + rounds), log = t / (std::string("log") + rounds);
    REQUIRE(jig({"train", "--corpus", t / "c", "--epochs", "2", "--train-rounds", rounds, "--out", model, "--log", log})
                .code == 0);
    const auto recs = records(log);
    CHECK(recs.front()["train_rounds"] == std::stoi(rounds));
    CHECK(recs[1]["train_rounds"] == std::stoi(rounds));
    CHECK(recs[1]["mean_rounds"].get<double>() <= std::stoi(rounds));
    CHECK(jig({"solve", "--corpus", t / "c", "--model", model, "--report", t / "r.jsonl"}).code == 0);
  }

  std::ofstream(t / "bad.jsw") << "NOPE and some more bytes";
  CHECK(jig({"solve", "--corpus", t / "c", "--model", t / "bad.jsw", "--report", t / "r.jsonl"}).code ==
        jigsolve::cli::kExitData);
}

TEST_CASE("chance-level oracle") {
  TempDir t("jigsolve_cli_chance");
  REQUIRE(jig({"solve", "--oracle", "1.0", "--grid", "3x3", "--count", "10000", "--report", t / "r.jsonl"}).code == 0);
  const auto a = aggregate(t / "r.jsonl");
  CHECK(a["exact_rate"].get<double>() <= 0.001);
  CHECK(a["configuration_space"]["exact"] == "362880");
  CHECK_FALSE(a.contains("wall_time"));
}

TEST_CASE("solve is deterministic across thread counts") {
  TempDir t("jigsolve_cli_det");
  const std::vector<std::string> base{"solve", "--oracle", "0.5", "--count", "300", "--seed", "9"};
  auto one = base, many = base;
  one.insert(one.end(), {"--threads", "1", "--report", t / "1.jsonl"});
  many.insert(many.end(), {"--threads", "8", "--report", t / "8.jsonl"});
  REQUIRE(jig(one).code == 0);
  REQUIRE(jig(many).code == 0);
  CHECK(slurp(t / "1.jsonl") == slurp(t / "8.jsonl"));
  for (const auto& r : records(t / "1.jsonl"))
    if (r["type"] == "aggregate") CHECK(r["exact_rate"].get<double>() <= r["d_le_2_rate"].get<double>());
}

TEST_CASE("bench sweeps") {
  TempDir t("jigsolve_cli_bench");
  CHECK(jig({"bench", "--radii", "", "--report", t / "x.jsonl"}).code == jigsolve::cli::kExitUsage);
  CHECK(jig({"bench", "--binary", "maybe", "--report", t / "x.jsonl"}).code == jigsolve::cli::kExitUsage);

  REQUIRE(jig({"bench", "--rounds", "1,5,10,20", "--binary", "on", "--noise", "0.5", "--count", "300", "--report",
               t / "rounds.jsonl"})
              .code == 0);
  const auto rounds = records(t / "rounds.jsonl");
  REQUIRE(rounds.size() == 4);
  for (std::size_t i = 1; i < rounds.size(); ++i)
    CHECK(rounds[i]["exact_rate"].get<double>() >= rounds[i - 1]["exact_rate"].get<double>());
  CHECK(rounds.back()["solved_by_round"].size() == 20);

  REQUIRE(jig({"bench", "--radii", "0,2,3", "--rounds", "1", "--binary", "on", "--count", "300", "--report",
               t / "radii.jsonl"})
              .code == 0);
  const auto radii = records(t / "radii.jsonl");
  REQUIRE(radii.size() == 3);
  for (std::size_t i = 1; i < radii.size(); ++i)
    CHECK(radii[i]["mean_first_cost"].get<double>() <= radii[i - 1]["mean_first_cost"].get<double>());
}

TEST_CASE("selftest") {
  const auto a = jig({"selftest"});
  CHECK(a.code == 0);
  CHECK(a.out.find("tolerance") != std::string::npos);
  CHECK(jig({"selftest"}).out == a.out);
  const auto m = jig({"selftest", "--mutate", "hungarian-tie-break"});
  CHECK(m.code == jigsolve::cli::kExitSelftest);
  CHECK(m.out.find("failed: assignment optimality") != std::string::npos);
}

TEST_CASE("info reports configuration spaces and head sizes") {
  const auto j = Json::parse(jig({"info", "--grid", "3x3"}).out);
  CHECK(j["configuration_space"]["exact"] == "362880");
  CHECK(j["unary_head"]["parameters"] == 16119);
  CHECK(j["binary_head"]["parameters"] == 405);
  CHECK(j["ball_size"] == 205);
}
