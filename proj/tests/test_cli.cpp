#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = "cli_stdout.tmp";
  const std::string err_path = "cli_stderr.tmp";
  const std::string cmd = env_prefix + std::string(RDSYNC_CLI_PATH) + " " + args + " > " +
                          out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

std::string write_spec(const std::string& name, const std::string& body) {
  std::ofstream out(name);
  out << body;
  return name;
}

const char* kFourStateSpec = R"({
  "states": ["a", "b", "c", "d"],
  "transitions": [
    {"from": "a", "to": "a", "prob": 0.5}, {"from": "a", "to": "b", "prob": 0.5},
    {"from": "b", "to": "b", "prob": 0.5}, {"from": "b", "to": "c", "prob": 0.5},
    {"from": "c", "to": "c", "prob": 0.5}, {"from": "c", "to": "d", "prob": 0.5},
    {"from": "d", "to": "d", "prob": 0.5}, {"from": "d", "to": "a", "prob": 0.5}
  ],
  "rds": {"kind": "independent"}
})";

}  // namespace

TEST_CASE("bad row sums: exit 2 with a structured error object") {
  const auto spec = write_spec("bad_rows.json", R"({
    "states": ["a", "b"],
    "transitions": [
      {"from": "a", "to": "a", "prob": 0.5}, {"from": "a", "to": "b", "prob": 0.4},
      {"from": "b", "to": "a", "prob": 0.5}, {"from": "b", "to": "b", "prob": 0.5}
    ]
  })");
  const auto r = run("analyze --spec " + spec + " --seed 1 --no-meta");
  CHECK(r.exit_code == 2);
  const json err = json::parse(r.err);
  CHECK(err.at("error") == "spec");
  CHECK(err.at("code") == "RowSumError");
  std::remove(spec.c_str());
}

TEST_CASE("analyze emits a versioned, machine-readable report") {
  const auto spec = write_spec("four.json", kFourStateSpec);
  const auto r = run("analyze --spec " + spec + " --seed 1 --no-meta");
  CHECK(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("schema_version") == 1);
  CHECK(doc.at("irreducible") == true);
  CHECK(doc.at("period") == 1);
  CHECK(doc.at("stationary").at("a") == doctest::Approx(0.25));
  std::remove(spec.c_str());
}

TEST_CASE("reports are byte-identical for identical argv and seed") {
  const auto spec = write_spec("four_det.json", kFourStateSpec);
  const std::string args = "attractor --spec " + spec +
                           " --seed deadbeef --scenarios 200 --threads 2 --no-meta";
  const auto first = run(args);
  const auto second = run(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out == second.out);
  CHECK(!first.out.empty());
  std::remove(spec.c_str());
}

TEST_CASE("insulation reports kappa-hat and the witness set") {
  const auto spec = write_spec("four_ins.json", kFourStateSpec);
  const auto r = run("insulation --spec " + spec + " --seed 2 --no-meta");
  CHECK(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("kappa_hat") == 1);
  std::remove(spec.c_str());
}

TEST_CASE("hit-times subcommand produces a censored summary") {
  const auto spec = write_spec("four_hit.json", kFourStateSpec);
  const auto r = run("hit-times --spec " + spec +
                     " --mode sync-pair --from a --to c --seed 3 --scenarios 500 --no-meta");
  CHECK(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("n_samples") == 500);
  CHECK(doc.at("n_censored") == 0);
  CHECK(doc.at("censored_mean").get<double>() > 0.0);
  std::remove(spec.c_str());
}

TEST_CASE("verify runs the invariant suite and exits zero on success") {
  const auto spec = write_spec("four_verify.json", kFourStateSpec);
  const auto r = run("verify --spec " + spec + " --seed 4 --no-meta");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("FAIL") == std::string::npos);
  std::remove(spec.c_str());
}

TEST_CASE("bundled example runs end to end") {
  const auto r = run("example four-state-f1f2 --seed 5 --scenarios 300 --no-meta");
  CHECK(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc.at("kappa") == 2);
  CHECK(doc.at("expected_outputs_met") == true);
}

TEST_CASE("seed falls back to the RDS_SYNC_SEED environment variable") {
  const auto spec = write_spec("four_env.json", kFourStateSpec);
  const std::string args = "cftp --spec " + spec + " --scenarios 100 --no-meta";
  const auto with_env = run(args, "env RDS_SYNC_SEED=abcd ");
  const auto with_flag = run(args + " --seed abcd");
  CHECK(with_env.exit_code == 0);
  CHECK(with_env.out == with_flag.out);
  std::remove(spec.c_str());
}

TEST_CASE("unknown subcommand and missing spec are usage errors") {
  CHECK(run("frobnicate").exit_code != 0);
  CHECK(run("analyze --no-meta --seed 1").exit_code == 2);
}

TEST_CASE("csv table lands in the output directory, one row per state") {
  const auto spec = write_spec("four_csv.json", kFourStateSpec);
  const auto r = run("analyze --spec " + spec + " --seed 6 --out cli_out_dir --no-meta");
  CHECK(r.exit_code == 0);
  const std::string csv = slurp("cli_out_dir/analyze.csv");
  int lines = 0;
  for (char c : csv) lines += c == '\n';
  CHECK(lines == 5);  // header + 4 states
  CHECK(csv.rfind("state,pi,", 0) == 0);
  CHECK(!slurp("cli_out_dir/analyze.json").empty());
  std::remove(spec.c_str());
  std::remove("cli_out_dir/analyze.csv");
  std::remove("cli_out_dir/analyze.json");
  std::remove("cli_out_dir");
}
