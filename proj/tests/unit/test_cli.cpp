#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

int grwsim(const std::string& args) {
  const std::string cmd = std::string(GRWSIM_EXE) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("grw_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Cli, ListAndDescribe) {
  EXPECT_EQ(grwsim("list"), 0);
  EXPECT_EQ(grwsim("describe numdiff"), 0);
  EXPECT_EQ(grwsim("describe no-such-scenario"), 3);
}

TEST(Cli, ConfigurationErrorsExitWithThree) {
  EXPECT_EQ(grwsim("run no-such-scenario"), 3);
  EXPECT_EQ(grwsim("run trench-flow --no-such-key 1"), 3);
  EXPECT_EQ(grwsim("run trench-flow --dx abc"), 3);
  EXPECT_EQ(grwsim("run trench-flow --preset huge"), 3);
  EXPECT_EQ(grwsim("run trench-flow --config /nonexistent.cfg"), 3);
  EXPECT_EQ(grwsim("run trench-flow --eps-a -1"), 3);
  EXPECT_EQ(grwsim("bogus"), 3);
}

TEST(Cli, RunWritesOutputs) {
  const fs::path out = scratch("run");
  const fs::path cfg = scratch("cfg.txt");
  {
    std::ofstream os(cfg);
    os << "# desk run\nsoil = loam\n";
  }
  ASSERT_EQ(grwsim("run trench-flow --config " + cfg.string() + " --seed 5 --out " + out.string() + " --eps_r 1e-5"),
            0);
  std::ifstream in(out / "summary.json");
  ASSERT_TRUE(in.good());
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("schema"), "grwsim-summary");
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_EQ(j.at("params").at("eps-r"), "1e-5");
  EXPECT_EQ(j.at("params").at("soil"), "loam");
  EXPECT_TRUE(fs::is_directory(out / "fields"));
  EXPECT_TRUE(fs::is_directory(out / "series"));
  fs::remove_all(out);
  fs::remove(cfg);
}

TEST(Cli, NonConvergenceExitsWithTwo) {
  const fs::path out = scratch("stall");
  EXPECT_EQ(grwsim("run trench-flow --max-iters 1 --eps-a 1e-30 --eps-r 1e-30 --out " + out.string()), 2);
  fs::remove_all(out);
}
