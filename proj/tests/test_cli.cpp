#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("clab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliRun run(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("\"") + CLAB_CLI_PATH + "\" " + args + " >\"" + out + "\" 2>\"" + err + "\"";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

nlohmann::json trailer(const std::string& err) {
  const auto pos = err.rfind("\n{");
  return nlohmann::json::parse(err.substr(pos == std::string::npos ? 0 : pos + 1));
}

}  // namespace

TEST_F(Cli, HelpForEverySubcommand) {
  EXPECT_EQ(run("--help").code, 0);
  for (const char* sub : {"psi-table", "verify-identities", "carleman-scan", "solve", "doubling", "inverse-demo"}) {
    const CliRun r = run(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, PsiTable) {
  const CliRun r = run("psi-table --eps 1.0 --grid 0:1:0.1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "s,psi,psi_prime,phi");
  EXPECT_NE(r.out.find("\n1,0.5,0.25,2\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("\n0,0,1,1\n"), std::string::npos);
  EXPECT_EQ(run("psi-table --eps 0 --grid 0:1:0.1").code, 2);
  EXPECT_EQ(run("psi-table --grid 0:2:0.5").code, 2);
}

TEST_F(Cli, VerifyIdentities) {
  const CliRun r = run("verify-identities --metric identity --samples 1000 --seed 7");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& [name, v] : j.at("identities").items()) EXPECT_LT(v.at("max_relative_residual").get<double>(), 1e-7);
  const CliRun bad = run("verify-identities --metric sphere");
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(trailer(bad.err).at("error").at("category"), "validation");
}

TEST_F(Cli, SolveMissingConfigIsValidationError) {
  const CliRun r = run("solve --config " + path("missing.json") + " --out " + path("s.bin"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(trailer(r.err).at("error").at("kind"), "config");
  EXPECT_FALSE(fs::exists(path("s.bin")));
}

TEST_F(Cli, SolveDoublingPipeline) {
  write("p.json", R"({"coefficient":{"plus":1,"minus":1},"boundary":{"type":"dirichlet","data":"harmonic:1"},
                      "h":0.03125,"grading":0.05})");
  const CliRun s = run("solve --config " + path("p.json") + " --out " + path("s.bin"));
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_LT(nlohmann::json::parse(s.out).at("residual").get<double>(), 1e-10);
  const CliRun d = run("doubling --solution " + path("s.bin") + " --radii 0.01,0.02 --rbar1 1 --out " + path("d.csv"));
  ASSERT_EQ(d.code, 0) << d.err;
  const auto j = nlohmann::json::parse(d.out);
  for (double q : j.at("ratio").get<std::vector<double>>()) EXPECT_NEAR(q, 16.0, 0.32);
  EXPECT_EQ(slurp(path("d.csv")).substr(0, 19), "r,mass,mass_2r,rati");
  EXPECT_EQ(run("doubling --solution " + path("s.bin") + " --radii 0.2 --rbar1 1").code, 2);
  write("junk.bin", "CLAB1 but not really");
  EXPECT_EQ(run("doubling --solution " + path("junk.bin") + " --radii 0.01 --rbar1 1").code, 3);
}

TEST_F(Cli, IncompatibleNeumannDataIsValidationError) {
  write("n.json", R"({"boundary":{"type":"neumann","data":"harmonic:0"},"h":0.125})");
  const CliRun r = run("solve --config " + path("n.json") + " --out " + path("n.bin"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(trailer(r.err).at("error").at("kind"), "parameter");
}

TEST_F(Cli, InverseDemo) {
  const CliRun r = run("inverse-demo --rho 0.2 --k 2 --h 0.03125");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("gap").get<double>(), j.at("closed_form_gap").get<double>(),
              0.01 * std::abs(j.at("closed_form_gap").get<double>()));
  EXPECT_EQ(run("inverse-demo --rho 0.2 --k 1 --h 0.03125").code, 2);
}

TEST_F(Cli, ScanAndReproducibility) {
  const std::string scan = "carleman-scan --estimate thm21 --gamma 1,2 --eps 0.5 --tau-grid 10:10000:4 --family bump:3 --seed 5";
  const CliRun a = run(scan + " --out " + path("a.csv") + " --summary " + path("a.json"));
  ASSERT_EQ(a.code, 0) << a.err;
  const CliRun b = run(scan + " --threads 3 --out " + path("b.csv") + " --summary " + path("b.json"));
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_FALSE(slurp(path("a.csv")).empty());
  EXPECT_EQ(run("carleman-scan --estimate thm99").code, 2);
  EXPECT_EQ(run("carleman-scan --estimate lem41 --support ball --tau-grid 10:100:2 --family bump:1").code, 2);
}
