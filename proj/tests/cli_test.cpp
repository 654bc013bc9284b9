#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crawlnet/cli.hpp"
#include "crawlnet/store.hpp"

using namespace crawlnet;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("crawlnet_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
  const Result r = run({});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("train"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(run({"train", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"train", "--schedule", "cubic"}).code, kExitUsage);
  EXPECT_EQ(run({"case"}).code, kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("sweep-hidden"), std::string::npos);
  EXPECT_EQ(run({"train", "--help"}).code, kExitOk);
}

TEST(Cli, VerifyTablesReportsMismatch) {
  const Result r = run({"verify-tables"});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_NE(r.out.find("25/26 rows consistent with targets (90,120) within 0.01 deg"),
            std::string::npos);
  EXPECT_NE(r.out.find("3\t148\t90.432"), std::string::npos) << r.out;
}

TEST_F(CliFiles, CaseIsByteDeterministic) {
  const Result a = run({"case", "--name", "case1", "--seed", "7", "--out-csv", file("a.csv"),
                        "--out-model", file("a.model")});
  const Result b = run({"case", "--name", "case1", "--seed", "7", "--out-csv", file("b.csv"),
                        "--out-model", file("b.model")});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(slurp(file("a.csv")), slurp(file("b.csv")));
  EXPECT_EQ(slurp(file("a.model")), slurp(file("b.model")));
  EXPECT_EQ(a.out.rfind("# case case1\n", 0), 0u);
  EXPECT_NE(a.out.find("converged at generation 43"), std::string::npos) << a.out;
}

TEST_F(CliFiles, TrainWritesOutputs) {
  const Result r = run({"train", "--hidden", "5", "--lr", "0.5", "--tolerance", "2", "--seed",
                        "3", "--out-csv", file("run.csv"), "--out-plot", file("plot.csv"),
                        "--out-model", file("net.model")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("converged at generation"), std::string::npos);
  const LoadedModel model = load_model(file("net.model"));
  EXPECT_EQ(model.network.hidden_size(), 5u);
  EXPECT_EQ(model.metadata.seed, 3u);
  EXPECT_EQ(slurp(file("plot.csv")).rfind("# denorm_mode=paper-stated\n", 0), 0u);
}

TEST(Cli, TrainBudgetExhaustionIsNotAnError) {
  const Result r = run({"train", "--max-gens", "3"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("not converged within 3 generations"), std::string::npos);
}

TEST(Cli, TrainRejectsBadConfiguration) {
  Result r = run({"train", "--lr", "-1"});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_NE(r.err.find("configuration error"), std::string::npos);
  r = run({"train", "--targets", "200,120"});
  EXPECT_EQ(r.code, kExitDomainError);
}

TEST_F(CliFiles, SweepsPrintSummaries) {
  Result r = run({"sweep-hidden", "--sizes", "2,5", "--repeats", "3", "--out", file("h.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("hidden_size\tconvergence_rate"), std::string::npos);
  EXPECT_FALSE(slurp(file("h.csv")).empty());

  r = run({"sweep-lr", "--rates", "0.5,0.9", "--repeats", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("learning_rate\tconvergence_rate"), std::string::npos);
}

TEST(Cli, SweepRejectsZeroSize) {
  const Result r = run({"sweep-hidden", "--sizes", "2,0", "--repeats", "1"});
  EXPECT_EQ(r.code, kExitDomainError);
  EXPECT_NE(r.err.find("configuration error"), std::string::npos);
}

TEST_F(CliFiles, ReplayFromRunCsvAndModel) {
  ASSERT_EQ(run({"case", "--name", "case1", "--seed", "7", "--out-csv", file("run.csv"),
                 "--out-model", file("net.model")})
                .code,
            kExitOk);

  Result r = run({"replay", "--run-csv", file("run.csv"), "--out", file("traj.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("cycles 43\n"), std::string::npos) << r.out;
  EXPECT_EQ(slurp(file("traj.csv")).rfind("generation,x,y,heading\n", 0), 0u);

  r = run({"replay", "--model", file("net.model")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("cycles 1\n"), std::string::npos);

  EXPECT_EQ(run({"replay"}).code, kExitUsage);
  EXPECT_EQ(run({"replay", "--model", "a", "--run-csv", "b"}).code, kExitUsage);
  EXPECT_EQ(run({"replay", "--model", file("absent.model")}).code, kExitDomainError);
  EXPECT_EQ(run({"replay", "--run-csv", file("run.csv"), "--geometry", "5,5"}).code, kExitUsage);
}
