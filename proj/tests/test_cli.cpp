#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "secbc/table.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("SECBC_CLI");
  REQUIRE_MESSAGE(env != nullptr, "SECBC_CLI must point at the built binary");
  return env;
}

struct RunResult {
  int exit_code;
  std::string err;
};

RunResult run(const std::string& args, const fs::path& dir) {
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd =
      cli_path() + " " + args + " 2>" + err_file.string() + " >/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.err = buf.str();
  return r;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Workdir {
  fs::path dir;
  Workdir() {
    dir = fs::temp_directory_path() / "secbc_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

const char* kGoodSpec = R"({
  "k_receivers": 1,
  "base": [[0.9, 0.1], [0.1, 0.9]],
  "kernels": [[[0.85, 0.15], [0.15, 0.85]]]
})";

}  // namespace

TEST_CASE("validate exit codes") {
  Workdir w;

  SUBCASE("valid document: exit 0, silent") {
    write_file(w / "spec.json", kGoodSpec);
    RunResult r = run("validate --spec " + (w / "spec.json").string(), w.dir);
    CHECK(r.exit_code == 0);
    CHECK(r.err.empty());
  }

  SUBCASE("row summing to 1.2: exit 1 with kernel and row named") {
    write_file(w / "bad.json", R"({
      "k_receivers": 1,
      "base": [[0.9, 0.1], [0.1, 0.9]],
      "kernels": [[[0.9, 0.3], [0.15, 0.85]]]
    })");
    RunResult r = run("validate --spec " + (w / "bad.json").string(), w.dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("kernel 1") != std::string::npos);
    CHECK(r.err.find("row 0") != std::string::npos);
  }

  SUBCASE("malformed nesting: exit 2") {
    write_file(w / "broken.json", R"({"k_receivers": 1, "base": [[0.5, 0.5], [1.0)");
    RunResult r = run("validate --spec " + (w / "broken.json").string(), w.dir);
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("region command") {
  Workdir w;
  write_file(w / "spec.json", kGoodSpec);
  write_file(w / "exp.json", R"({
    "mode": "region",
    "seed": 7,
    "weights": [[1.0]],
    "optimizer": {"restarts": 6, "iterations": 40}
  })");

  SUBCASE("closed-form check and byte-identical rerun") {
    RunResult r1 = run("region --spec " + (w / "spec.json").string() +
                           " --experiment " + (w / "exp.json").string() + " --out " +
                           (w / "a.csv").string(),
                       w.dir);
    REQUIRE(r1.exit_code == 0);
    const std::string first = read_file(w / "a.csv");

    secbc::TableData t = secbc::parse_table(first);
    const double r1_rate = secbc::cell_as_double(t.rows[0][t.column_index("R1")]);
    CHECK(r1_rate == doctest::Approx(0.29117190937268445).epsilon(1e-3));

    RunResult r2 = run("region --spec " + (w / "spec.json").string() +
                           " --experiment " + (w / "exp.json").string() + " --out " +
                           (w / "b.csv").string(),
                       w.dir);
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(w / "b.csv") == first);
  }

  SUBCASE("--seed overrides the document") {
    RunResult r = run("region --spec " + (w / "spec.json").string() +
                          " --experiment " + (w / "exp.json").string() + " --out " +
                          (w / "c.csv").string() + " --seed 1234",
                      w.dir);
    REQUIRE(r.exit_code == 0);
    // same channel, same optimum; the file still parses and carries one row
    secbc::TableData t = secbc::parse_table(read_file(w / "c.csv"));
    CHECK(t.rows.size() == 1);
  }
}

TEST_CASE("simulate command and budget refusal") {
  Workdir w;
  write_file(w / "spec.json", kGoodSpec);

  SUBCASE("small run succeeds and repeats byte-identically") {
    write_file(w / "sim.json", R"({
      "mode": "simulate",
      "seed": 11,
      "chain": {"stages": [[[0.5, 0.5]]]},
      "n_list": [4, 8],
      "trials": 60,
      "codebooks": 2,
      "rates": {"rule": "scaled_bounds", "scale": 0.6, "tau": 0.02}
    })");
    RunResult r1 = run("simulate --spec " + (w / "spec.json").string() +
                           " --experiment " + (w / "sim.json").string() + " --out " +
                           (w / "sim_a.csv").string(),
                       w.dir);
    REQUIRE(r1.exit_code == 0);
    RunResult r2 = run("simulate --spec " + (w / "spec.json").string() +
                           " --experiment " + (w / "sim.json").string() + " --out " +
                           (w / "sim_b.csv").string(),
                       w.dir);
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(w / "sim_a.csv") == read_file(w / "sim_b.csv"));
  }

  SUBCASE("equivocation mode emits secrecy columns") {
    write_file(w / "eq.json", R"({
      "mode": "equivocation",
      "seed": 13,
      "chain": {"stages": [[[0.5, 0.5]]]},
      "n_list": [4],
      "codebooks": 2,
      "rates": {"rule": "scaled_bounds", "scale": 0.6, "tau": 0.02},
      "equivocation": {"subsets": ["each", "sum"], "lambda_trials": 40}
    })");
    RunResult r = run("simulate --spec " + (w / "spec.json").string() +
                          " --experiment " + (w / "eq.json").string() + " --out " +
                          (w / "eq.csv").string(),
                      w.dir);
    REQUIRE(r.exit_code == 0);
    secbc::TableData t = secbc::parse_table(read_file(w / "eq.csv"));
    CHECK(t.column_index("Re_1") < t.columns.size());
    CHECK(t.column_index("Gap_1") < t.columns.size());
    CHECK(t.column_index("Lambda1") < t.columns.size());
    CHECK(t.rows.size() == 2);
    // equivocation never exceeds the realized message rate
    for (const auto& row : t.rows) {
      const double re = secbc::cell_as_double(row[t.column_index("Re_1")]);
      const double ref = secbc::cell_as_double(row[t.column_index("Rref1")]);
      CHECK(re <= ref + 1e-9);
    }
  }

  SUBCASE("budget refusal exits 3 and names the offending product") {
    write_file(w / "big.json", R"({
      "mode": "simulate",
      "seed": 11,
      "chain": {"stages": [[[0.5, 0.5]]]},
      "n_list": [64],
      "trials": 10,
      "codebooks": 1,
      "rates": {"rule": "explicit", "message": [0.2], "randomization": [0.1]}
    })");
    RunResult r = run("simulate --spec " + (w / "spec.json").string() +
                          " --experiment " + (w / "big.json").string() + " --out " +
                          (w / "big.csv").string() + " --budget-cap 4096",
                      w.dir);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("N_k*n") != std::string::npos);
  }
}

TEST_CASE("export-plotdata command") {
  Workdir w;
  write_file(w / "spec.json", kGoodSpec);
  write_file(w / "exp.json", R"({
    "mode": "region",
    "seed": 7,
    "weights": [[1.0]],
    "optimizer": {"restarts": 4, "iterations": 30}
  })");
  RunResult setup = run("region --spec " + (w / "spec.json").string() +
                            " --experiment " + (w / "exp.json").string() + " --out " +
                            (w / "region.csv").string(),
                        w.dir);
  REQUIRE(setup.exit_code == 0);

  SUBCASE("region export is idempotent") {
    RunResult r1 = run("export-plotdata --in " + (w / "region.csv").string() +
                           " --out " + (w / "p1.csv").string() + " --kind region",
                       w.dir);
    REQUIRE(r1.exit_code == 0);
    RunResult r2 = run("export-plotdata --in " + (w / "region.csv").string() +
                           " --out " + (w / "p2.csv").string() + " --kind region",
                       w.dir);
    REQUIRE(r2.exit_code == 0);
    CHECK(read_file(w / "p1.csv") == read_file(w / "p2.csv"));
    secbc::TableData t = secbc::parse_table(read_file(w / "p1.csv"));
    CHECK(t.columns == std::vector<std::string>{"series", "x", "y"});
  }

  SUBCASE("unknown kind exits 1; schema mismatch exits 2") {
    RunResult bad = run("export-plotdata --in " + (w / "region.csv").string() +
                            " --out " + (w / "p.csv").string() + " --kind nope",
                        w.dir);
    CHECK(bad.exit_code == 1);
    RunResult mismatch = run("export-plotdata --in " + (w / "region.csv").string() +
                                 " --out " + (w / "p.csv").string() +
                                 " --kind pe-median",
                             w.dir);
    CHECK(mismatch.exit_code == 2);
  }
}

TEST_CASE("usage errors belong to the parse-error class") {
  Workdir w;
  RunResult r = run("region --spec missing.json", w.dir);
  CHECK(r.exit_code == 2);
}
