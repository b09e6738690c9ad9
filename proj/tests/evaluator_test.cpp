#include "aclaudit/evaluator.hpp"

#include <gtest/gtest.h>

#include "aclaudit/fixtures.hpp"
#include "test_support.hpp"

namespace aclaudit {
namespace {

using R = ReportRight;
using testing::AceGen;
using testing::Lab;
using testing::user_sid;

std::vector<std::string> all_folders(const Snapshot& s) {
    std::vector<std::string> out;
    for_each_folder(s.root, [&](const FolderNode& f) { out.push_back(f.path); });
    return out;
}

std::vector<Sid> all_users(const Snapshot& s) {
    std::vector<Sid> out;
    for (const auto& p : s.directory.principals())
        if (p.kind == PrincipalKind::User) out.push_back(p.sid);
    return out;
}

TEST(AccessCheckTest, DenyTouchingRemainingBitsWins) {
    const std::set<Sid> closure{user_sid(1), well_known::kEveryone};
    Dacl dacl;
    dacl.aces = {{AceType::Allow, user_sid(1), AccessMask(0x1), {}},
                 {AceType::Deny, well_known::kEveryone, AccessMask(0x3), {}},
                 {AceType::Allow, user_sid(1), AccessMask(0x2), {}}};
    EXPECT_TRUE(access_check(closure, dacl, AccessMask(0x1)).allowed());
    const auto denied = access_check(closure, dacl, AccessMask(0x2));
    EXPECT_FALSE(denied.allowed());
    EXPECT_EQ(denied.ace_index, 1u);
    // Bit 0x1 was granted before the deny; 0x2 is still pending when it is met.
    EXPECT_FALSE(access_check(closure, dacl, AccessMask(0x3)).allowed());
}

TEST(AccessCheckTest, SkipsInheritOnlyAndForeignEntries) {
    const std::set<Sid> closure{user_sid(1), well_known::kEveryone};
    Dacl dacl;
    dacl.aces = {{AceType::Deny, user_sid(1), AccessMask(0x1), {AceFlag::ObjectInherit, AceFlag::InheritOnly}},
                 {AceType::Deny, user_sid(2), AccessMask(0x1), {}},
                 {AceType::Allow, user_sid(1), AccessMask(0x1), {}}};
    EXPECT_TRUE(access_check(closure, dacl, AccessMask(0x1)).allowed());
}

TEST(AccessCheckTest, NullEmptyAndZeroRequest) {
    const std::set<Sid> closure{well_known::kEveryone};
    EXPECT_TRUE(access_check(closure, Dacl::null(), rights::kFullControl).allowed());
    const auto empty = access_check(closure, Dacl{}, rights::kListDirectory);
    EXPECT_FALSE(empty.allowed());
    EXPECT_FALSE(empty.ace_index);
    EXPECT_THROW(access_check(closure, Dacl{}, AccessMask(0)), EmptyRequest);
}

TEST(AccessCheckTest, PartialGrantIsDenied) {
    const std::set<Sid> closure{well_known::kEveryone};
    Dacl dacl;
    dacl.aces = {{AceType::Allow, well_known::kEveryone, rights::kRead, {}}};
    EXPECT_FALSE(access_check(closure, dacl, rights::kReadAndExecute).allowed());
    dacl.aces.push_back({AceType::Allow, well_known::kEveryone, rights::kTraverse, {}});
    EXPECT_TRUE(access_check(closure, dacl, rights::kReadAndExecute).allowed());
}

// Prepending a matching deny for a bit of the request always denies.
TEST(AccessCheckTest, DenyDominance) {
    AceGen gen(11);
    for (int i = 0; i < 3000; ++i) {
        const auto closure = gen.closure();
        Dacl dacl = gen.dacl();
        const auto right = kAllRights[gen.below(kAllRights.size())];
        const auto atoms = decompose(right_mask(right)).rights;
        std::vector<Sid> members(closure.begin(), closure.end());
        Ace deny{AceType::Deny, members[gen.below(members.size())], right_mask(atoms[gen.below(atoms.size())]), {}};
        if (gen.coin()) deny.flags.set(AceFlag::Inherited);
        dacl.aces.insert(dacl.aces.begin(), deny);
        const auto d = access_check(closure, dacl, right_mask(right));
        EXPECT_FALSE(d.allowed());
        EXPECT_EQ(d.ace_index, 0u);
    }
}

TEST(AccessCheckTest, InheritOnlyEntriesDoNotMatter) {
    AceGen gen(12);
    for (int i = 0; i < 2000; ++i) {
        const auto closure = gen.closure();
        const Dacl dacl = gen.dacl();
        Dacl stripped;
        for (const auto& a : dacl.aces)
            if (!a.is_inherit_only()) stripped.aces.push_back(a);
        for (const auto r : kAllRights) {
            EXPECT_EQ(access_check(closure, dacl, right_mask(r)).allowed(),
                      access_check(closure, stripped, right_mask(r)).allowed());
        }
    }
}

TEST(AccessCheckTest, CompositeIsConjunctionOfBitsOnCanonicalDacls) {
    AceGen gen(13);
    for (int i = 0; i < 2000; ++i) {
        const auto closure = gen.closure();
        const Dacl dacl = canonicalize(gen.dacl());
        for (const auto r : kAllRights) {
            if (is_atomic(r)) continue;
            bool all = true;
            for (const auto a : decompose(right_mask(r)).rights)
                all = all && access_check(closure, dacl, right_mask(a)).allowed();
            // A composite can only be granted when every bit is.
            if (access_check(closure, dacl, right_mask(r)).allowed()) {
                EXPECT_TRUE(all);
            }
        }
    }
}

TEST(EvaluatorTest, LabUserBReportExceptReadAndExecute) {
    const auto lab = gen_lab_fixture(FixtureVariant::RootOnly);
    Evaluator ev(lab);
    for (const auto name : kLibraryFolders) {
        const auto row = ev.effective_rights(Lab::user('B'), "C:/Library/" + std::string(name));
        EXPECT_EQ(row.user_name, "User-B");
        for (const auto r : kAllRights) {
            if (r == R::ReadAndExecute) continue;
            EXPECT_EQ(row.value(r), testing::kUserBReportRow[index_of(r)]) << name << " " << name_of(r);
        }
        // The Sample Group deny on Read bits meets ReadAndExecute before any allow.
        EXPECT_FALSE(row.value(R::ReadAndExecute));
        const auto decision = ev.check(Lab::user('B'), "C:/Library/" + std::string(name), rights::kReadAndExecute);
        EXPECT_EQ(decision.ace_index, 0u);
        EXPECT_EQ(decision.source, "C:/Library");
    }
}

TEST(EvaluatorTest, LabOtherUsers) {
    const auto lab = gen_lab_fixture(FixtureVariant::RootOnly);
    Evaluator ev(lab);
    const auto guess = ev.effective_rights(Lab::guess(), "C:/Library/HR");
    for (const auto r : kAllRights) EXPECT_TRUE(guess.value(r)) << name_of(r);
    const auto a = ev.effective_rights(Lab::user('A'), "C:/Library/HR");
    EXPECT_TRUE(a.value(R::ReadAndExecute));
    EXPECT_FALSE(a.value(R::WriteData));
    const auto c = ev.effective_rights(Lab::user('C'), "C:/Library/HR");
    EXPECT_FALSE(c.value(R::Read));
    EXPECT_THROW(ev.effective_rights(user_sid(42), "C:/Library/HR"), UnknownPrincipal);
    EXPECT_THROW(ev.effective_rights(Lab::user('A'), "C:/Library/Nope"), UnknownPath);
}

TEST(EvaluatorTest, IcaclsVariantRotatingFullControl) {
    const auto lab = gen_lab_fixture(FixtureVariant::Icacls);
    Evaluator ev(lab);
    EXPECT_TRUE(ev.effective_rights(Lab::user('A'), "C:/Library/Accounts").value(R::FullControl));
    EXPECT_FALSE(ev.effective_rights(Lab::user('A'), "C:/Library/Archive").value(R::FullControl));
    for (const auto name : kLibraryFolders)
        EXPECT_FALSE(ev.effective_rights(Lab::user('C'), "C:/Library/" + std::string(name)).value(R::Read)) << name;
}

TEST(EvaluatorTest, NullAndEmptyFolderDacls) {
    auto lab = gen_lab_fixture(FixtureVariant::RootOnly);
    lab.root.children[0].sd.dacl = Dacl::null();
    lab.root.children[1].sd.dacl.aces.clear();
    lab.root.children[1].sd.is_protected = true;
    Evaluator ev(lab);
    const auto open = ev.effective_rights(Lab::user('C'), lab.root.children[0].path);
    const auto closed = ev.effective_rights(Lab::guess(), lab.root.children[1].path);
    for (const auto r : kAllRights) {
        EXPECT_TRUE(open.value(r));
        EXPECT_FALSE(closed.value(r));
    }
}

TEST(EvaluatorTest, CachesOncePerUserAndFolder) {
    GenParams params;
    params.seed = 5;
    params.users = 12;
    params.folders = 80;
    const auto snap = gen_random(params);
    Evaluator ev(snap);
    const auto users = all_users(snap);
    const auto folders = all_folders(snap);
    const auto m = ev.build_matrix(users, folders, kAllRights, 4);
    EXPECT_EQ(m.rows.size(), users.size() * folders.size());
    EXPECT_EQ(ev.stats().closure_computations, users.size());
    EXPECT_EQ(ev.stats().dacl_computations, folders.size());
    ev.build_matrix(users, folders, kAllRights);
    EXPECT_EQ(ev.stats().closure_computations, users.size());
    EXPECT_EQ(ev.stats().dacl_computations, folders.size());
}

TEST(EvaluatorTest, RowOrderIndependentOfThreads) {
    const auto snap = gen_random(verification_params(9));
    auto users = all_users(snap);
    std::reverse(users.begin(), users.end());
    auto folders = all_folders(snap);
    std::reverse(folders.begin(), folders.end());
    Evaluator one(snap), many(snap);
    const auto a = one.build_matrix(users, folders, kAllRights, 1);
    const auto b = many.build_matrix(users, folders, kAllRights, 8);
    EXPECT_EQ(a, b);
    ASSERT_FALSE(a.rows.empty());
    EXPECT_EQ(a.rows.front().user, users.front());
    for (std::size_t i = 1; i < folders.size() && i < a.rows.size(); ++i)
        EXPECT_LE(to_lower(a.rows[i - 1].folder), to_lower(a.rows[i].folder));
}

TEST(EvaluatorTest, DuplicatesDropped) {
    const auto lab = gen_lab_fixture(FixtureVariant::RootOnly);
    Evaluator ev(lab);
    const std::vector<Sid> users{Lab::user('A'), Lab::user('A')};
    const std::vector<std::string> folders{"C:/Library/HR", "c:/library/hr"};
    const std::vector<ReportRight> rights{R::Read, R::Read, R::Delete};
    const auto m = ev.build_matrix(users, folders, rights);
    EXPECT_EQ(m.rows.size(), 1u);
    EXPECT_EQ(m.rights, (std::vector<ReportRight>{R::Read, R::Delete}));
}

}  // namespace
}  // namespace aclaudit
