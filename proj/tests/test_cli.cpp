// End-to-end checks of the command line tool: pipelines, exit codes,
// determinism, and option handling.  Each case spawns the real binary.
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "subprocess.hpp"
#include "texradon/io.hpp"

namespace {

constexpr const char* kCli = TEXRADON_CLI_PATH;

using testutil::RunResult;
using testutil::TempDir;
using testutil::run_cli;
using testutil::slurp;

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  TempDir dir;
  CHECK(run_cli(kCli, "--help", dir).exit_code == 0);
  const auto help = run_cli(kCli, "--help", dir);
  CHECK(contains(help.out, "gen"));
  CHECK(contains(help.out, "verify"));
  CHECK(run_cli(kCli, "gen --help", dir).exit_code == 0);
  CHECK(run_cli(kCli, "", dir).exit_code == 2);         // subcommand required
  CHECK(run_cli(kCli, "frobnicate", dir).exit_code == 2);
  CHECK(run_cli(kCli, "gen", dir).exit_code == 2);      // --L is required
  CHECK(run_cli(kCli, "gen --model cubic --L 4", dir).exit_code == 2);
  CHECK(run_cli(kCli, "project missing.coef --h 0,0,1", dir).exit_code == 2);
}

TEST_CASE("model resolution errors exit with the usage code") {
  TempDir dir;
  const auto r = run_cli(kCli, "gen --model unimodal --kappa 6 --L 8", dir);
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "need at least"));
}

TEST_CASE("generate writes to stdout or a file identically") {
  TempDir dir;
  const auto to_stdout =
      run_cli(kCli, "gen --model unimodal --kappa 2 --L 8 --center 0.4,1.1,-0.3", dir);
  CHECK(to_stdout.exit_code == 0);
  CHECK(contains(to_stdout.out, "so3coef v1 L=8"));
  const std::string path = dir.file("c.coef");
  const auto to_file = run_cli(
      kCli, "gen --model unimodal --kappa 2 --L 8 --center 0.4,1.1,-0.3 -o " + path,
      dir);
  CHECK(to_file.exit_code == 0);
  CHECK(slurp(path) == to_stdout.out);
}

TEST_CASE("full pipeline reconstructs the even part deterministically") {
  TempDir dir;
  const std::string coef = dir.file("c.coef");
  REQUIRE(run_cli(kCli,
                  "gen --model unimodal --kappa 2 --L 8 --center 0.9,0.7,0.2 -o " +
                      coef,
                  dir)
              .exit_code == 0);

  const std::string figs = dir.file("fig");
  const std::string hargs = " --h 0,0,1 --h 0.7071067811865476,0,0.7071067811865475 --h 1,1,1";
  const auto proj =
      run_cli(kCli, "project " + coef + hargs + " -o " + figs, dir);
  REQUIRE(proj.exit_code == 0);
  CHECK(contains(proj.err, "mean 1.000e+00"));  // density figures have unit mean

  // Byte-identical rerun.
  const std::string figs2 = dir.file("fig2");
  REQUIRE(run_cli(kCli, "project " + coef + hargs + " -o " + figs2, dir)
              .exit_code == 0);
  for (int i = 0; i < 3; ++i)
    CHECK(slurp(figs + "." + std::to_string(i)) ==
          slurp(figs2 + "." + std::to_string(i)));

  const std::string rec = dir.file("rec.coef");
  const auto inv = run_cli(kCli,
                           "invert " + figs + ".0 " + figs + ".1 " + figs +
                               ".2 --L 8 --truth " + coef + " --matrix -o " + rec,
                           dir);
  CHECK(inv.exit_code == 0);
  CHECK(contains(inv.err, "rank 133 of 565"));  // 3 directions under-determine band 8
  CHECK(contains(inv.err, "even-part error vs truth"));
  CHECK(contains(inv.err, "degree  size  identifiable"));

  // Reconstruction is reproducible byte for byte as well.
  const std::string rec2 = dir.file("rec2.coef");
  REQUIRE(run_cli(kCli,
                  "invert " + figs + ".0 " + figs + ".1 " + figs +
                      ".2 --L 8 -o " + rec2,
                  dir)
              .exit_code == 0);
  CHECK(slurp(rec) == slurp(rec2));
}

TEST_CASE("projection supports raw transforms and custom grids") {
  TempDir dir;
  const std::string coef = dir.file("c.coef");
  REQUIRE(run_cli(kCli, "gen --model uniform --L 4 -o " + coef, dir).exit_code == 0);
  const std::string fig = dir.file("f.txt");
  const auto r = run_cli(
      kCli, "project " + coef + " --h 0,0,1 --raw-radon --grid-L 6 -o " + fig, dir);
  CHECK(r.exit_code == 0);
  // Grid band 6 has (6+1)(2*6+1) = 91 points.
  CHECK(contains(slurp(fig), "n=91"));
}

TEST_CASE("invert refuses under-resolved grids with the data exit code") {
  TempDir dir;
  const std::string coef = dir.file("c.coef");
  REQUIRE(run_cli(kCli, "gen --model uniform --L 4 -o " + coef, dir).exit_code == 0);
  const std::string fig = dir.file("f.txt");
  REQUIRE(run_cli(kCli, "project " + coef + " --h 0,0,1 -o " + fig, dir).exit_code ==
          0);
  const auto r = run_cli(kCli, "invert " + fig + " --L 16", dir);
  CHECK(r.exit_code == 3);
  CHECK(contains(r.err, "determines only"));
}

TEST_CASE("invert methods agree on determined problems") {
  TempDir dir;
  const std::string coef = dir.file("c.coef");
  REQUIRE(run_cli(kCli,
                  "gen --model unimodal --kappa 0.5 --L 4 --center 0.3,0.9,1.2 "
                  "-o " +
                      coef,
                  dir)
              .exit_code == 0);
  std::string hargs;
  // Nine directions saturate every degree through band 4; the = form keeps
  // leading minus signs out of option parsing.
  for (int i = 0; i < 9; ++i) {
    const double t = 0.3 + 0.29 * i, p = 0.7 * i - 2.0;
    hargs += " --h=" + std::to_string(std::sin(t) * std::cos(p)) + "," +
             std::to_string(std::sin(t) * std::sin(p)) + "," +
             std::to_string(std::cos(t));
  }
  const std::string figs = dir.file("fig");
  REQUIRE(run_cli(kCli, "project " + coef + hargs + " -o " + figs, dir).exit_code ==
          0);
  std::string inputs;
  for (int i = 0; i < 9; ++i) inputs += " " + figs + "." + std::to_string(i);

  const std::string a = dir.file("a.coef"), b = dir.file("b.coef");
  const auto ra =
      run_cli(kCli, "invert" + inputs + " --L 4 --method slice -o " + a, dir);
  REQUIRE(ra.exit_code == 0);
  CHECK(contains(ra.err, "rank 107 of 107"));
  REQUIRE(run_cli(kCli, "invert" + inputs + " --L 4 --method backprojection -o " + b,
                  dir)
              .exit_code == 0);
  // The two solvers agree on the (fully identifiable) solution.
  const auto ca = texradon::io::load_so3coef(a);
  const auto cb = texradon::io::load_so3coef(b);
  CHECK(ca.max_abs_diff(cb) < 1e-6);
  const auto bad =
      run_cli(kCli, "invert" + inputs + " --L 4 --method fancy", dir);
  CHECK(bad.exit_code == 2);
}

TEST_CASE("verify reports one line per check and fails loudly") {
  TempDir dir;
  const std::string sym = dir.file("symbol.txt");
  const auto r = run_cli(
      kCli, "verify --L 4 --trials 5 --suite slice,symbol --symbol-out " + sym, dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "slice pass"));
  CHECK(contains(r.out, "symbol pass"));
  CHECK(contains(slurp(sym), "dualsym v1 L=4"));
  CHECK(run_cli(kCli, "verify --suite nonsense", dir).exit_code == 2);

  const auto all = run_cli(kCli, "verify --L 4 --trials 5", dir);
  CHECK(all.exit_code == 0);
  int lines = 0;
  for (char ch : all.out) lines += (ch == '\n');
  CHECK(lines == 7);  // six suites, roundtrip contributes two lines
}

TEST_CASE("band limit ceiling from the environment") {
  TempDir dir;
  const auto r =
      run_cli("TEXRADON_LMAX=4 " + std::string(kCli), "gen --model uniform --L 8", dir);
  CHECK(r.exit_code == 2);
  const auto ok =
      run_cli("TEXRADON_LMAX=4 " + std::string(kCli), "gen --model uniform --L 4", dir);
  CHECK(ok.exit_code == 0);
  const auto bad = run_cli("TEXRADON_LMAX=999 " + std::string(kCli), "--help", dir);
  CHECK(bad.exit_code == 2);
}

TEST_CASE("options can come from a config file") {
  TempDir dir;
  const std::string conf = dir.file("tex.conf");
  {
    std::ofstream os(conf);
    os << "[gen]\nmodel = uniform\nL = 4\n";
  }
  const auto r = run_cli(kCli, "--config " + conf + " gen", dir);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "so3coef v1 L=4"));
}

TEST_CASE("thread count does not change project output") {
  TempDir dir;
  const std::string coef = dir.file("c.coef");
  REQUIRE(run_cli(kCli, "gen --model unimodal --kappa 2 --L 8 -o " + coef, dir)
              .exit_code == 0);
  const std::string f1 = dir.file("t1.txt"), f4 = dir.file("t4.txt");
  REQUIRE(run_cli(kCli, "--threads 1 project " + coef + " --h 1,2,2 -o " + f1, dir)
              .exit_code == 0);
  REQUIRE(run_cli(kCli, "--threads 4 project " + coef + " --h 1,2,2 -o " + f4, dir)
              .exit_code == 0);
  CHECK(slurp(f1) == slurp(f4));
}

}  // TEST_SUITE
