#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DEPSGLD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out_dir(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("depsgld_cli_" + name)).string();
}

}  // namespace

TEST(Cli, SuccessfulRun) {
  EXPECT_EQ(run_cli("sample-1d --topology ring --agents 5 --iters 10 --chains 4 --out " +
                    out_dir("ok")),
            0);
  EXPECT_TRUE(std::filesystem::exists(out_dir("ok") + "/ring/trace.csv"));
}

TEST(Cli, ValidateNetwork) {
  EXPECT_EQ(run_cli("validate-network --topology star --agents 6"), 0);
}

TEST(Cli, InvalidConfigurationExitsTwo) {
  EXPECT_EQ(run_cli("sample-1d --set simplex"), 2);
  EXPECT_EQ(run_cli("sample-1d --gamma -1"), 2);
  EXPECT_EQ(run_cli("sample-1d --topology ring --agents 2"), 2);
  EXPECT_EQ(run_cli("sample-1d --unknown-flag 3"), 2);
  EXPECT_EQ(run_cli("blr --delta 5 --topology complete"), 2);
  EXPECT_EQ(run_cli("sample-1d --config /nonexistent.cfg"), 2);
  EXPECT_EQ(run_cli(""), 2);
}

TEST(Cli, DataErrorExitsThree) {
  EXPECT_EQ(run_cli("logreg --data /nonexistent/wdbc.data --out " + out_dir("data")), 3);
}

TEST(Cli, DivergenceExitsFour) {
  EXPECT_EQ(run_cli("blr --n-samples 400 --agents 4 --batch 20 --eta 0.05 --iters 100 --chains 4 "
                    "--topology ring --sampler depsgld --out " + out_dir("diverge")),
            4);
}
