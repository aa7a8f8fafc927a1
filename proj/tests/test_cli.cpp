// End-to-end checks of the asep binary. ctest passes the binary path as the
// last argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "asep/design.hpp"

namespace {

std::string g_cli;
std::filesystem::path g_dir;

struct RunResult {
  int code;
  std::string out;
};

RunResult run(const std::string& args) {
  const auto outfile = g_dir / "cmd_output.txt";
  const std::string cmd = g_cli + " " + args + " > " + outfile.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream is(outfile);
  std::stringstream ss;
  ss << is.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("design then check round trip") {
  const auto file = (g_dir / "d.asmat").string();
  const auto made = run("design --n 12 --k 2 --delta 0.5 --seed 7 --out " + file);
  CHECK(made.code == 0);
  CHECK(made.out.find("m=14") != std::string::npos);

  // written file parses back to a design of the advertised shape
  const asep::TestDesign d = asep::load_design(file);
  CHECK(d.n == 12);
  CHECK(d.m == 14);

  const auto loose = run("check --in " + file + " --k 2 --epsilon 0.5");
  CHECK(loose.code == 0);
  CHECK(loose.out.find("epsilon_sep=") != std::string::npos);
  CHECK(loose.out.find("total_subsets=66") != std::string::npos);

  const auto json = run("check --in " + file + " --k 2 --json");
  CHECK(json.code == 0);
  CHECK(json.out.find("\"total_subsets\": 66") != std::string::npos);

  // same design twice: identical bytes
  const auto file2 = (g_dir / "d2.asmat").string();
  CHECK(run("design --n 12 --k 2 --delta 0.5 --seed 7 --out " + file2).code == 0);
  CHECK(slurp(file) == slurp(file2));
}

TEST_CASE("check exit code signals the epsilon rule") {
  // two identical nonzero columns: epsilon_sep = 2/3 at k = 1
  const auto file = g_dir / "dup.asmat";
  std::ofstream os(file);
  os << "asmat v1\nn=3 m=2\n110\n001\n";
  os.close();

  CHECK(run("check --in " + file.string() + " --k 1 --epsilon 0.7").code == 0);
  CHECK(run("check --in " + file.string() + " --k 1 --epsilon 0.5").code == 1);
  CHECK(run("check --in " + file.string() + " --k 1").code == 0);
}

TEST_CASE("check reports parse errors with line numbers") {
  const auto file = g_dir / "bad.asmat";
  std::ofstream os(file);
  os << "asmat v1\nn=3 m=3\n110\n001\n";  // one row short
  os.close();
  const auto r = run("check --in " + file.string() + " --k 1");
  CHECK(r.code == 2);
  CHECK(r.out.find("line 5") != std::string::npos);
}

TEST_CASE("bounds report") {
  const auto big = run("bounds --n 1024 --k 16");
  CHECK(big.code == 0);
  CHECK(big.out.find("M2(ln2)=224.000000 (log2 units)") != std::string::npos);
  CHECK(big.out.find("sandwich_lo=96.000000") != std::string::npos);

  const auto small = run("bounds --n 4 --k 2");
  CHECK(small.code == 0);
  CHECK(small.out.find("counting_bound=2.584963") != std::string::npos);

  CHECK(run("bounds --n 4 --k 3").code != 0);  // k > n/2
}

TEST_CASE("rate curve file") {
  const auto csv = (g_dir / "rates.csv").string();
  const auto r = run("rate-curve --beta-min 0.05 --beta-max 1.0 --steps 20 --out " + csv);
  CHECK(r.code == 0);

  const std::string text = slurp(csv);
  CHECK(text.substr(0, 41) == "beta,alpha_opt,r_thm4,r_dd,r_cor1,r_cor2\n");
  // last row is beta = 1 with r_thm4 = 1
  const auto lastline = text.substr(text.rfind('\n', text.size() - 2) + 1);
  CHECK(lastline.substr(0, 2) == "1,");
  CHECK(lastline.find(",1,") != std::string::npos);
  // the beta = 0.5 row carries the closed-form values
  const auto mid = text.find("\n0.5,");
  REQUIRE(mid != std::string::npos);
  const auto midline = text.substr(mid + 1, text.find('\n', mid + 1) - mid - 1);
  CHECK(midline.find("0.353825230282") != std::string::npos);
  CHECK(midline.find("0.530737845423") != std::string::npos);

  // byte-identical regardless of repetition or thread count
  const auto csv2 = (g_dir / "rates2.csv").string();
  CHECK(run("rate-curve --beta-min 0.05 --beta-max 1.0 --steps 20 --threads 4 --out " +
            csv2)
            .code == 0);
  CHECK(text == slurp(csv2));
}

TEST_CASE("simulate on an identity design") {
  const auto file = g_dir / "id10.asmat";
  asep::save_design(file, asep::TestDesign::identity(10));
  const auto r = run("simulate --in " + file.string() + " --k 2 --trials 1000 --seed 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("successes=0") != std::string::npos);
  CHECK(r.out.find("point=0.000000") != std::string::npos);
}

TEST_CASE("mc subcommand modes") {
  const auto overlap = run("mc --n 6 --k 2 --m 4 --trials 200 --seed 1");
  CHECK(overlap.code == 0);
  CHECK(overlap.out.find("union_bound=2.375") != std::string::npos);

  const auto file = g_dir / "id6.asmat";
  asep::save_design(file, asep::TestDesign::identity(6));
  const auto eps = run("mc --in " + file.string() + " --k 2 --trials 200 --seed 1");
  CHECK(eps.code == 0);
  CHECK(eps.out.find("successes=0") != std::string::npos);

  const auto markov =
      run("mc --markov --n 10 --k 2 --delta 1.0 --epsilon 1.0 --designs 20 --seed 2");
  CHECK(markov.code == 0);
  CHECK(markov.out.find("fraction=1.000000") != std::string::npos);

  CHECK(run("mc --k 2 --trials 10").code != 0);  // missing design size
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("").code != 0);
  CHECK(run("bounds").code != 0);            // missing required options
  CHECK(run("frobnicate --n 3").code != 0);  // unknown subcommand
  CHECK(run("check --in /nonexistent.asmat --k 2").code == 2);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-asep-binary>\n");
    return 1;
  }
  g_cli = argv[argc - 1];
  g_dir = std::filesystem::temp_directory_path() /
          ("asep_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(g_dir);

  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv);
  const int rc = ctx.run();
  std::filesystem::remove_all(g_dir);
  return rc;
}
