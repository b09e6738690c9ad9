#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "aclaudit/snapshot.hpp"

namespace aclaudit {

enum class FixtureVariant {
    /// Root C:/Library carries the five-entry DACL; subfolders inherit only.
    RootOnly,
    /// Subfolders list their inherited entries materialized plus one
    /// FullControl entry for a rotating user, as an icacls dump shows them.
    Icacls,
};

/// The ten subfolder names under C:/Library.
inline constexpr std::array<std::string_view, 10> kLibraryFolders = {
    "Accounts", "Archive", "Finance", "HR", "Management", "Meetings", "Projects", "R&D", "Surveys", "Working",
};

/// The CORUH lab: User-A..User-F, guess, and Sample Group = {User-B, User-C}.
Snapshot gen_lab_fixture(FixtureVariant variant);

struct GenParams {
    std::uint64_t seed = 1;
    std::size_t folders = 50;
    std::size_t max_depth = 4;
    std::size_t users = 10;
    std::size_t groups = 4;
    double nesting_probability = 0.3;
    std::size_t min_aces = 0;
    std::size_t max_aces = 4;
    double deny_fraction = 0.3;
    double protected_fraction = 0.1;
    double null_dacl_fraction = 0.02;
    double oi_probability = 0.6;
    double ci_probability = 0.7;
    double np_probability = 0.1;
    double io_probability = 0.1;

    /// Throws InvalidParams.
    void validate() const;
};

/// Parameters for differential runs: sizes vary with the seed up to depth 6,
/// 200 folders, 50 users and 20 groups, with 0.3 deny and 0.1 protected
/// fractions.
GenParams verification_params(std::uint64_t seed);

/// Deterministic for a given seed. Group memberships may nest and cycle.
Snapshot gen_random(const GenParams& params);

/// Rewrites every folder's stored DACL as the full list it evaluates with
/// (explicit entries plus ID-flagged inherited copies), the way a live
/// system stores it.
Snapshot materialize(const Snapshot& snapshot);

}  // namespace aclaudit
