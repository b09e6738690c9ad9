#include "aclaudit/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "aclaudit/evaluator.hpp"
#include "aclaudit/fixtures.hpp"
#include "test_support.hpp"

namespace aclaudit {
namespace {

using testing::Lab;

void expect_agreement(const Snapshot& snap, const std::string& label) {
    Evaluator ev(snap);
    std::vector<Sid> users{well_known::kEveryone};
    for (const auto& p : snap.directory.principals()) users.push_back(p.sid);
    std::vector<std::string> folders;
    for_each_folder(snap.root, [&](const FolderNode& f) { folders.push_back(f.path); });
    for (const auto& row : ev.build_matrix(users, folders, kAllRights).rows) {
        const auto expected = oracle::oracle_rights(snap, row.user, row.folder);
        ASSERT_EQ(row.values, expected.values) << label << " " << row.user.str() << " " << row.folder;
    }
}

TEST(OracleTest, LabFixtures) {
    expect_agreement(gen_lab_fixture(FixtureVariant::RootOnly), "root-only");
    expect_agreement(gen_lab_fixture(FixtureVariant::Icacls), "icacls");
}

TEST(OracleTest, LabUserBReadAndExecute) {
    const auto row = oracle::oracle_rights(gen_lab_fixture(FixtureVariant::RootOnly), Lab::user('B'), "C:/Library/HR");
    EXPECT_TRUE(row.value(ReportRight::Traverse));
    EXPECT_FALSE(row.value(ReportRight::ListDirectory));
    EXPECT_FALSE(row.value(ReportRight::ReadAndExecute));
}

TEST(OracleTest, Errors) {
    const auto lab = gen_lab_fixture(FixtureVariant::RootOnly);
    EXPECT_THROW(oracle::oracle_rights(lab, testing::user_sid(5), "C:/Library"), UnknownPrincipal);
    EXPECT_THROW(oracle::oracle_rights(lab, Lab::user('A'), "C:/Nope"), UnknownPath);
}

TEST(OracleTest, RandomSnapshots) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        auto params = verification_params(seed);
        params.null_dacl_fraction = 0.05;
        params.np_probability = 0.25;
        params.io_probability = 0.25;
        expect_agreement(gen_random(params), "seed " + std::to_string(seed));
    }
}

// Materialized lists with ID entries in non-canonical order.
TEST(OracleTest, ShuffledMaterializedLists) {
    testing::AceGen gen(41);
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        auto snap = materialize(gen_random(verification_params(seed)));
        std::function<void(FolderNode&)> shuffle = [&](FolderNode& n) {
            std::shuffle(n.sd.dacl.aces.begin(), n.sd.dacl.aces.end(), gen.rng());
            for (auto& c : n.children) shuffle(c);
        };
        shuffle(snap.root);
        expect_agreement(snap, "shuffled seed " + std::to_string(seed));
    }
}

}  // namespace
}  // namespace aclaudit
