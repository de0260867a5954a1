#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "efg/cli.hpp"
#include "efg/convergence.hpp"
#include "oracles.hpp"

using namespace efg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("efg_harness_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"efgsolve"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

int run_cli_capture(const std::vector<std::string>& args, std::string* out) {
  std::ostringstream captured;
  std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
  const int code = run_cli(args);
  std::cout.rdbuf(old);
  *out = captured.str();
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv records round-trip exactly") {
  std::vector<ConvergenceRecord> records;
  ConvergenceRecord a;
  a.iteration = 1;
  a.nashconv = 1.0 / 3.0;
  a.exploitability_p0 = 0.1234567890123456789;
  a.exploitability_p1 = a.nashconv - a.exploitability_p0;
  a.best_iter_nashconv = 1e-17;
  a.value_p0 = -1.0 / 18.0;
  a.wall_ms = 12;
  ConvergenceRecord b;
  b.iteration = 2;
  b.nashconv = 5e-324;  // denormal minimum
  b.value_p0 = -0.0;
  records = {a, b};

  std::ostringstream out;
  write_csv(out, records, {{"game", "kuhn"}, {"algorithm", "cfr"}});
  std::istringstream in(out.str());
  const CsvDocument doc = parse_csv(in);
  REQUIRE(doc.header == kCsvHeader);
  REQUIRE(doc.meta("game") == "kuhn");
  REQUIRE(doc.meta("algorithm") == "cfr");
  REQUIRE(doc.records.size() == 2);
  REQUIRE(doc.records[0] == a);
  REQUIRE(doc.records[1] == b);
  REQUIRE_FALSE(doc.records[1].best_iter_nashconv.has_value());
}

TEST_CASE("csv parser rejects malformed input") {
  std::istringstream missing_header("");
  REQUIRE_THROWS_AS(parse_csv(missing_header), std::runtime_error);
  std::istringstream bad_row(std::string(kCsvHeader) + "\n1,2,3\n");
  REQUIRE_THROWS_AS(parse_csv(bad_row), std::runtime_error);
}

TEST_CASE("merge into long format") {
  auto make_doc = [](const std::string& algorithm, int rows) {
    CsvDocument doc;
    doc.header = kCsvHeader;
    if (!algorithm.empty()) doc.metadata = {{"algorithm", algorithm}, {"game", "kuhn"}};
    for (int i = 1; i <= rows; ++i) {
      ConvergenceRecord r;
      r.iteration = i;
      doc.records.push_back(r);
    }
    return doc;
  };
  SECTION("two files, 100 rows each: 200 merged rows") {
    const std::string merged = merge_csv_documents(
        {make_doc("cfr", 100), make_doc("xfp", 100)}, {"a.csv", "b.csv"});
    std::istringstream in(merged);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    REQUIRE(lines == 201);
    REQUIRE(merged.rfind("algorithm,game,iteration", 0) == 0);
  }
  SECTION("missing metadata falls back to the filename stem") {
    const std::string merged =
        merge_csv_documents({make_doc("", 1)}, {"runs/kuhn_cfr_run.csv"});
    REQUIRE(merged.find("\nkuhn_cfr_run,") != std::string::npos);
  }
  SECTION("empty input list is an error") {
    REQUIRE_THROWS_AS(merge_csv_documents({}, {}), std::invalid_argument);
  }
  SECTION("schema mismatch is an error") {
    CsvDocument bad = make_doc("cfr", 1);
    bad.header = "iteration,foo";
    REQUIRE_THROWS_AS(merge_csv_documents({bad}, {"bad.csv"}), std::runtime_error);
  }
}

TEST_CASE("cli solve") {
  TempDir dir;
  SECTION("writes the configured number of rows and exits 0") {
    const std::string out = dir.file("kuhn_cfr.csv");
    REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "cfr", "--iterations", "1000",
                     "--eval-every", "10", "--out", out}) == 0);
    const CsvDocument doc = load_csv(out);
    REQUIRE(doc.records.size() == 100);
    REQUIRE(doc.meta("game") == "kuhn");
    REQUIRE(doc.meta("algorithm") == "cfr");
  }
  SECTION("unknown algorithm exits 2") {
    REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "nope", "--out",
                     dir.file("x.csv")}) == 2);
  }
  SECTION("unknown game exits 2") {
    REQUIRE(run_cli({"solve", "--game", "nope", "--algorithm", "cfr", "--out",
                     dir.file("x.csv")}) == 2);
  }
  SECTION("missing required arguments exit 2") {
    REQUIRE(run_cli({"solve", "--game", "kuhn"}) == 2);
  }
  SECTION("deterministic reruns are byte-identical") {
    const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
    const std::vector<std::string> base = {"solve",        "--game",   "kuhn",
                                           "--algorithm",  "ed_qc_md", "--iterations",
                                           "64",           "--deterministic"};
    auto with_out = [&](const std::string& path) {
      std::vector<std::string> args = base;
      args.push_back("--out");
      args.push_back(path);
      return args;
    };
    REQUIRE(run_cli(with_out(a)) == 0);
    REQUIRE(run_cli(with_out(b)) == 0);
    const std::string bytes_a = slurp(a);
    REQUIRE(bytes_a == slurp(b));
    REQUIRE(bytes_a.find(",0\n") != std::string::npos);  // wall_ms zeroed
  }
  SECTION("ED_DETERMINISTIC=1 forces determinism through the environment") {
    setenv("ED_DETERMINISTIC", "1", 1);
    const std::string a = dir.file("env_a.csv"), b = dir.file("env_b.csv");
    REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "xfp", "--iterations", "32",
                     "--out", a}) == 0);
    REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "xfp", "--iterations", "32",
                     "--out", b}) == 0);
    unsetenv("ED_DETERMINISTIC");
    REQUIRE(slurp(a) == slurp(b));
  }
  SECTION("solver errors exit 1 and name the iteration") {
    const int code = run_cli({"solve", "--game", "kuhn", "--algorithm", "ed_q_l2",
                              "--iterations", "50", "--out", dir.file("err.csv")});
    REQUIRE(code == 1);
  }
}

TEST_CASE("cli eval") {
  TempDir dir;
  const std::string policy_path = dir.file("uniform.json");
  const auto game = build_game("kuhn");
  save_policy(uniform_joint_policy(*game), "kuhn", -1, policy_path);

  SECTION("prints NashConv matching the library evaluation") {
    std::string out;
    REQUIRE(run_cli_capture({"eval", "--game", "kuhn", "--policy", policy_path}, &out) == 0);
    const double expected = nash_conv(*game, uniform_joint_policy(*game));
    char formatted[64];
    std::snprintf(formatted, sizeof(formatted), "nashconv=%.12g", expected);
    REQUIRE(out.find(formatted) != std::string::npos);
    REQUIRE(out.find("exploitability_p0=") != std::string::npos);
  }
  SECTION("two single-player files merge into a joint") {
    const std::string p0_path = dir.file("p0.json");
    const std::string p1_path = dir.file("p1.json");
    save_policy(uniform_policy(*game, 0), "kuhn", 0, p0_path);
    save_policy(uniform_policy(*game, 1), "kuhn", 1, p1_path);
    std::string out;
    REQUIRE(run_cli_capture(
                {"eval", "--game", "kuhn", "--policy", p0_path, "--policy", p1_path}, &out) ==
            0);
    REQUIRE(out.find("nashconv=") != std::string::npos);
  }
  SECTION("a policy missing infostates exits 1 and names the key") {
    const std::string partial_path = dir.file("partial.json");
    save_policy(uniform_policy(*game, 0), "kuhn", 0, partial_path);
    std::ostringstream captured;
    std::streambuf* old = std::cerr.rdbuf(captured.rdbuf());
    const int code = run_cli({"eval", "--game", "kuhn", "--policy", partial_path});
    std::cerr.rdbuf(old);
    REQUIRE(code == 1);
    REQUIRE(captured.str().find("missing") != std::string::npos);
  }
  SECTION("a truncated file exits 1") {
    const std::string broken = dir.file("broken.json");
    std::ofstream f(broken);
    f << "{\"format\": \"efg-policy\", \"ga";
    f.close();
    REQUIRE(run_cli({"eval", "--game", "kuhn", "--policy", broken}) == 1);
  }
  SECTION("the equilibrium fixture evaluates far below uniform") {
    // Round-trip a solved policy through the CLI: solve, save, eval.
    const std::string csv = dir.file("cfr.csv");
    const std::string solved = dir.file("solved.json");
    REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "cfr", "--iterations", "2000",
                     "--out", csv, "--save-policy", solved}) == 0);
    std::string out;
    REQUIRE(run_cli_capture({"eval", "--game", "kuhn", "--policy", solved}, &out) == 0);
    const double parsed = std::strtod(out.c_str() + out.find('=') + 1, nullptr);
    REQUIRE(parsed < 0.05);
  }
}

TEST_CASE("cli compare") {
  TempDir dir;
  const std::string a = dir.file("a.csv"), b = dir.file("b.csv");
  REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "cfr", "--iterations", "100",
                   "--eval-every", "20", "--out", a}) == 0);
  REQUIRE(run_cli({"solve", "--game", "kuhn", "--algorithm", "xfp", "--iterations", "100",
                   "--eval-every", "20", "--out", b}) == 0);
  SECTION("merges to stdout") {
    std::string out;
    REQUIRE(run_cli_capture({"compare", a, b}, &out) == 0);
    std::istringstream in(out);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    REQUIRE(lines == 11);  // header + 2 x 5 rows
    REQUIRE(out.find("cfr,kuhn,") != std::string::npos);
    REQUIRE(out.find("xfp,kuhn,") != std::string::npos);
  }
  SECTION("writes to a file with --out") {
    const std::string merged = dir.file("merged.csv");
    REQUIRE(run_cli({"compare", a, b, "--out", merged}) == 0);
    REQUIRE(slurp(merged).rfind("algorithm,game,", 0) == 0);
  }
  SECTION("no input files exits 2") {
    REQUIRE(run_cli({"compare"}) == 2);
  }
  SECTION("schema mismatch exits 2") {
    const std::string bad = dir.file("bad.csv");
    std::ofstream f(bad);
    f << "iteration,foo\n1,2\n";
    f.close();
    REQUIRE(run_cli({"compare", a, bad}) == 2);
  }
}

TEST_CASE("cli solve leduc ed_qc_softmax with the sqrt schedule trends down") {
  TempDir dir;
  const std::string out = dir.file("leduc_ed.csv");
  REQUIRE(run_cli({"solve", "--game", "leduc", "--algorithm", "ed_qc_softmax", "--iterations",
                   "1000", "--lr", "sqrt", "--deterministic", "--out", out}) == 0);
  const CsvDocument doc = load_csv(out);
  REQUIRE(doc.records.size() >= 8);
  REQUIRE(doc.records.back().nashconv < doc.records.front().nashconv / 2.0);
}

TEST_CASE("cli eval of the analytic equilibrium fixture prints ~0") {
  TempDir dir;
  const std::string path = dir.file("equilibrium.json");
  save_policy(efg::testing::kuhn_equilibrium(1.0 / 6.0), "kuhn", -1, path);
  std::string out;
  REQUIRE(run_cli_capture({"eval", "--game", "kuhn", "--policy", path}, &out) == 0);
  const double parsed = std::strtod(out.c_str() + out.find('=') + 1, nullptr);
  REQUIRE(parsed < 1e-9);
}

TEST_CASE("cli games lists the four benchmarks") {
  std::string out;
  REQUIRE(run_cli_capture({"games"}, &out) == 0);
  for (const std::string& name : game_names()) {
    REQUIRE(out.find(name + ":") != std::string::npos);
  }
  REQUIRE(out.find("infostates_p0=6") != std::string::npos);
}

TEST_CASE("cli config file with flag precedence") {
  TempDir dir;
  const std::string cfg = dir.file("run.cfg");
  {
    std::ofstream f(cfg);
    f << "[solve]\n"
      << "game=kuhn\n"
      << "algorithm=cfr\n"
      << "iterations=40\n"
      << "eval-every=10\n";
  }
  SECTION("config file alone") {
    const std::string out = dir.file("from_cfg.csv");
    REQUIRE(run_cli({"--config", cfg, "solve", "--out", out}) == 0);
    REQUIRE(load_csv(out).records.size() == 4);
  }
  SECTION("command-line flags win on conflict") {
    const std::string out = dir.file("flag_wins.csv");
    REQUIRE(run_cli({"--config", cfg, "solve", "--iterations", "20", "--out", out}) == 0);
    REQUIRE(load_csv(out).records.size() == 2);
  }
}
