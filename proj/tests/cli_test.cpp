#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "aclaudit/reporting.hpp"
#include "aclaudit/snapshot_io.hpp"
#include "test_support.hpp"

namespace aclaudit {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("aclaudit_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
        lab_ = path("lab.json");
        ASSERT_EQ(run({"fixture", "--variant", "root-only", "--out", lab_}).code, 0);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
    std::string lab_;
};

TEST_F(CliTest, InspectUserB) {
    const auto r = run({"inspect", "--snapshot", lab_, "--users", "CORUH\\User-B"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto records = parse_csv(r.out);
    ASSERT_EQ(records.size(), 11u);
    EXPECT_EQ(records[0][0], "User");
    EXPECT_EQ(records[0][1], "Directory");
    EXPECT_EQ(records[0].size(), 21u);
    EXPECT_EQ(records[1][0], "User-B");
    EXPECT_EQ(records[1][1], "C:/Library/Accounts");
    EXPECT_EQ(records[10][1], "C:/Library/Working");
    EXPECT_NE(r.out.find("\r\n"), std::string::npos);
}

TEST_F(CliTest, InspectOptions) {
    auto r = run({"inspect", "--snapshot", lab_, "--users", "userb,User-A", "--rights", "read,Traverse", "--include-root",
                  "--sort", "Read:asc"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto records = parse_csv(r.out);
    EXPECT_EQ(records[0], (std::vector<std::string>{"User", "Directory", "Traverse", "Read"}));
    ASSERT_EQ(records.size(), 23u);
    EXPECT_EQ(records[1][3], "Yes");
    EXPECT_EQ(records[1][0], "User-A");
    EXPECT_EQ(records[1][1], "C:/Library");

    r = run({"inspect", "--snapshot", lab_, "--all-users", "--rights", "atomic", "--root", "C:/Library/HR",
             "--include-root"});
    ASSERT_EQ(r.code, 0) << r.err;
    records = parse_csv(r.out);
    EXPECT_EQ(records[0].size(), 16u);
    EXPECT_EQ(records.size(), 8u);  // seven users on one folder
    EXPECT_EQ(records[1][0], "guess");

    const std::string out_file = path("out.csv");
    ASSERT_EQ(run({"inspect", "--snapshot", lab_, "--users", "guess", "--out", out_file}).code, 0);
    EXPECT_EQ(parse_csv(read_text_file(out_file)).size(), 11u);
}

TEST_F(CliTest, OutputIsDeterministic) {
    const auto seeded = path("seeded.json");
    ASSERT_EQ(run({"fixture", "--seed", "7", "--folders", "60", "--users", "8", "--out", seeded}).code, 0);
    const auto a = run({"inspect", "--snapshot", seeded, "--all-users", "--recurse"});
    const auto b = run({"inspect", "--snapshot", seeded, "--all-users", "--recurse", "--threads", "4"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(run({"fixture", "--seed", "7", "--folders", "60", "--users", "8"}).out, read_text_file(seeded));
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"frobnicate"}).code, 1);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_}).code, 1);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_, "--users", "guess", "--all-users"}).code, 1);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_, "--users", "guess", "--rights", "Execute"}).code, 1);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_, "--users", "guess", "--sort", "Nope"}).code, 1);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_, "--users", "guess", "--sort", "Read:up"}).code, 1);
    EXPECT_EQ(run({"inspect", "--snapshot", path("missing.json"), "--users", "guess"}).code, 2);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_, "--users", "nobody"}).code, 3);
    EXPECT_EQ(run({"inspect", "--snapshot", lab_, "--users", "guess", "--root", "C:/Nope"}).code, 3);
    EXPECT_EQ(run({"fixture"}).code, 1);
    EXPECT_EQ(run({"fixture", "--variant", "other"}).code, 1);
    EXPECT_EQ(run({"fixture", "--seed", "1", "--folders", "0"}).code, 1);
    EXPECT_EQ(run({"bench", "--users", "0"}).code, 1);
    EXPECT_EQ(run({"verify", "--seeds", "5..2"}).code, 1);

    write_text_file(path("bad.json"), "{\"version\": 2}");
    EXPECT_EQ(run({"inspect", "--snapshot", path("bad.json"), "--users", "guess"}).code, 2);
    const auto sddl = run({"sddl", "parse", "D:("});
    EXPECT_EQ(sddl.code, 2);
    EXPECT_NE(sddl.err.find("sddl:4"), std::string::npos);
}

TEST_F(CliTest, HelpListsEveryFlag) {
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> cases = {
        {{"inspect"},
         {"--snapshot", "--users", "--all-users", "--root", "--recurse", "--include-root", "--rights", "--sort", "--out",
          "--threads", "Excel"}},
        {{"import-icacls"}, {"--dump", "--directory", "--out", "--strict"}},
        {{"sddl"}, {"parse", "canon"}},
        {{"fixture"}, {"--variant", "--seed", "--folders", "--users", "--groups", "--max-depth", "--out"}},
        {{"verify"}, {"--seeds", "--snapshot", "--counterexample"}},
        {{"bench"}, {"--users", "--folders", "--seed", "--threads"}},
    };
    for (const auto& [command, flags] : cases) {
        auto args = command;
        args.push_back("--help");
        const auto r = run(args);
        EXPECT_EQ(r.code, 0);
        for (const auto& flag : flags) EXPECT_NE(r.out.find(flag), std::string::npos) << command[0] << " " << flag;
    }
    const auto top = run({"--help"});
    EXPECT_EQ(top.code, 0);
    for (const char* sub : {"inspect", "import-icacls", "sddl", "fixture", "verify", "bench"})
        EXPECT_NE(top.out.find(sub), std::string::npos) << sub;
}

TEST_F(CliTest, ImportIcacls) {
    const auto snapshot = path("imported.json");
    const auto r = run({"import-icacls", "--dump", testing::data_path("icacls_snippet.txt"), "--directory", lab_, "--out",
                        snapshot});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("SynthesizedFolder"), std::string::npos);
    const auto inspected = run({"inspect", "--snapshot", snapshot, "--users", "User-A", "--rights", "FullControl"});
    ASSERT_EQ(inspected.code, 0) << inspected.err;
    EXPECT_EQ(inspected.out,
              "User,Directory,FullControl\r\nUser-A,c:/library/Accounts,Yes\r\nUser-A,c:/library/Archive,No\r\n");
    EXPECT_EQ(run({"import-icacls", "--dump", testing::data_path("icacls_snippet.txt"), "--directory", lab_, "--strict",
                   "--out", snapshot})
                  .code,
              2);
    write_text_file(path("bad.txt"), "c:\\x Everyone:(Q)\n");
    EXPECT_EQ(run({"import-icacls", "--dump", path("bad.txt"), "--directory", lab_}).code, 2);
}

TEST_F(CliTest, Sddl) {
    auto r = run({"sddl", "canon", "D:(A;CIOI;0x1f01ff;;;S-1-1-0)"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "D:(A;OICI;FA;;;WD)\n");
    r = run({"sddl", "parse", "O:BAD:(D;;0x20089;;;S-1-5-21-1-2-3-2001)"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"ReadPermissions\""), std::string::npos);
    EXPECT_NE(r.out.find("S-1-5-32-544"), std::string::npos);
    EXPECT_EQ(run({"sddl", "canon", "D:(A;;XY;;;WD)"}).code, 2);
}

TEST_F(CliTest, VerifyAndBench) {
    auto r = run({"verify", "--seeds", "1..3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("snapshots=3 pairs=", 0), 0u);
    EXPECT_NE(r.out.find("mismatches=0"), std::string::npos);
    r = run({"verify", "--snapshot", lab_});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "snapshots=1 pairs=99 mismatches=0\n");
    r = run({"bench", "--users", "5", "--folders", "20"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("users=5 folders=20 rights=19 elapsed_ms=", 0), 0u);
}

}  // namespace
}  // namespace aclaudit
