#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace {

const std::string kModel = " --lambda 1 --mu 1 --D 0.01 --v 1 --t 3 --iota_F 1";

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string path = std::string(::testing::TempDir()) + "kinetic_cli_out.txt";
    const std::string cmd = std::string(KINETIC_CLI) + " " + args + " >" + path + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(path.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST(Cli, HelpIsSuccess)
{
    auto r = run("--help");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("table1"), std::string::npos);
}

TEST(Cli, MbdWritesCsv)
{
    auto r = run("mbd --n 10" + kModel);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("j,probability\n", 0), 0u);
}

TEST(Cli, ParameterFile)
{
    const std::string path = std::string(::testing::TempDir()) + "kinetic_params.txt";
    {
        std::ofstream f(path);
        f << "lambda = 1\nmu = 1\nD = 0.01\nv = 1\nt = 3\niota_F = 1\nn = 20\n";
    }
    auto r = run("--params " + path + " moments");
    std::remove(path.c_str());
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run("--bogus").code, 2);
    EXPECT_EQ(run("mbd --n 10 --mu 1 --D 0.01 --v 1 --t 3 --iota_F 1").code, 2);
    EXPECT_EQ(run("mbd --n 10 --lambda -1 --mu 1 --D 0.01 --v 1 --t 3 --iota_F 1").code, 2);
}

TEST(Cli, AccuracyAndResourceErrors)
{
    EXPECT_EQ(run("pde --lo -1 --hi 4.5 --nodes 1101" + kModel).code, 3);
    EXPECT_EQ(run("mbd --bruteforce --n 25" + kModel).code, 4);
}

TEST(Cli, SimulateIsReproducible)
{
    auto a = run("simulate --model ctmc -N 100 --seed 7" + kModel);
    auto b = run("simulate --model ctmc -N 100 --seed 7" + kModel);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}
