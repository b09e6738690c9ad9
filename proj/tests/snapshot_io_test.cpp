#include "aclaudit/snapshot_io.hpp"

#include <gtest/gtest.h>

#include "aclaudit/fixtures.hpp"
#include "test_support.hpp"

namespace aclaudit {
namespace {

const char* kMinimal = R"json({
  "version": 1,
  "domain": "D",
  "principals": [
    {"sid": "S-1-5-21-1-2-3-1", "name": "D\\alice", "kind": "user"},
    {"sid": "S-1-5-21-1-2-3-9", "name": "D\\staff", "kind": "group", "members": ["S-1-5-21-1-2-3-1"]}
  ],
  "folders": [
    {"path": "C:\\Data", "aces": [{"type": "allow", "sid": "S-1-1-0", "mask": "0x1200A9", "flags": ["OI", "CI"]}]},
    {"path": "C:/Data/Locked", "protected": true, "aces": []},
    {"path": "C:/Data/Open", "dacl_present": false},
    {"path": "C:/Data/S", "sddl": "O:BAD:(D;;0x10000;;;S-1-5-21-1-2-3-9)"}
  ]
})json";

template <typename E>
std::string error_where(const std::string& doc) {
    try {
        load_snapshot(doc);
    } catch (const E& e) {
        if constexpr (std::is_base_of_v<SchemaError, E>) return e.where();
        return "";
    } catch (const std::exception& e) {
        return std::string("other: ") + e.what();
    }
    return "no error";
}

std::string patched(std::string_view from, std::string_view to) {
    std::string doc = kMinimal;
    const auto at = doc.find(from);
    EXPECT_NE(at, std::string::npos) << from;
    return doc.replace(at, from.size(), to);
}

TEST(SnapshotLoadTest, Minimal) {
    const auto snap = load_snapshot(kMinimal);
    EXPECT_EQ(snap.domain(), "D");
    EXPECT_EQ(snap.root.path, "C:/Data");
    ASSERT_EQ(snap.root.children.size(), 3u);
    EXPECT_TRUE(snap.root.children[0].sd.is_protected);
    EXPECT_FALSE(snap.root.children[1].sd.dacl.present);
    EXPECT_EQ(snap.root.children[2].sd.owner, well_known::kAdministrators);
    EXPECT_EQ(snap.root.sd.dacl.aces[0].mask.bits(), 0x1200A9u);
}

TEST(SnapshotLoadTest, SchemaErrors) {
    EXPECT_EQ(error_where<SchemaError>(patched("\"version\": 1", "\"version\": 2")), "/version");
    EXPECT_EQ(error_where<SchemaError>(patched("\"kind\": \"user\"", "\"kind\": \"robot\"")), "/principals/0/kind");
    EXPECT_EQ(error_where<SchemaError>(patched("\"mask\": \"0x1200A9\"", "\"mask\": \"1200A9\"")),
              "/folders/0/aces/0/mask");
    EXPECT_EQ(error_where<SchemaError>(patched("\"OI\", \"CI\"", "\"OI\", \"OI\"")), "/folders/0/aces/0/flags");
    EXPECT_EQ(error_where<SchemaError>(patched("\"domain\"", "\"extra\": 0, \"domain\"")), "/extra");
    EXPECT_EQ(error_where<SchemaError>(patched("C:/Data/Open", "C:/Elsewhere")), "/folders/2");
    EXPECT_EQ(error_where<SchemaError>("{"), "");
    EXPECT_EQ(error_where<ConflictingSecurityForm>(patched("\"sddl\"", "\"protected\": true, \"sddl\"")), "/folders/3");
    EXPECT_EQ(error_where<SddlError>(patched("O:BAD:", "O:ZZD:")), "");
}

TEST(SnapshotLoadTest, ValidationDefects) {
    try {
        load_snapshot(patched("\"members\": [\"S-1-5-21-1-2-3-1\"]", "\"members\": [\"S-1-5-21-1-2-3-404\", \"bad\"]"));
        FAIL() << "expected ValidationFailure";
    } catch (const ValidationFailure& e) {
        std::vector<Defect::Kind> kinds;
        for (const auto& d : e.defects()) kinds.push_back(d.kind);
        EXPECT_EQ(kinds, (std::vector<Defect::Kind>{Defect::Kind::MalformedSid, Defect::Kind::DanglingMember,
                                                    Defect::Kind::DanglingMember}));
    }
}

TEST(SnapshotRoundTripTest, Fixtures) {
    for (const auto variant : {FixtureVariant::RootOnly, FixtureVariant::Icacls}) {
        const auto snap = gen_lab_fixture(variant);
        const auto text = save_snapshot(snap);
        const auto back = load_snapshot(text);
        EXPECT_EQ(back, snap);
        EXPECT_EQ(save_snapshot(back), text);
    }
    const auto minimal = load_snapshot(kMinimal);
    EXPECT_EQ(load_snapshot(save_snapshot(minimal)), minimal);
}

TEST(SnapshotRoundTripTest, RandomSnapshots) {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto snap = gen_random(verification_params(seed));
        const auto text = save_snapshot(snap);
        ASSERT_EQ(load_snapshot(text), snap) << "seed " << seed;
        EXPECT_EQ(save_snapshot(gen_random(verification_params(seed))), text);
    }
}

TEST(LoadDirectoryTest, PrincipalsOnly) {
    const auto dir = load_directory(kMinimal);
    EXPECT_EQ(dir.size(), 2u);
    EXPECT_THROW(load_directory(R"({"domain": "D"})"), SchemaError);
}

}  // namespace
}  // namespace aclaudit
