#pragma once

#include <array>
#include <string>
#include <string_view>

#include "aclaudit/access_mask.hpp"
#include "aclaudit/snapshot.hpp"

namespace aclaudit::oracle {

/// Same shape as an evaluator row, produced by the brute-force path.
struct OracleRow {
    Sid user = well_known::kEveryone;
    std::string folder;
    std::array<bool, kRightCount> values{};

    bool value(ReportRight r) const noexcept { return values[index_of(r)]; }
};

/// Reference evaluation with no caching and no shared machinery: closure by
/// repeated full-directory expansion, inherited ACEs rebuilt from the root on
/// every call, and each atomic bit decided by the first matching ACE that
/// carries it. Composites are the conjunction of their bits.
/// Throws UnknownPrincipal / UnknownPath.
OracleRow oracle_rights(const Snapshot& snapshot, const Sid& user, std::string_view folder);

}  // namespace aclaudit::oracle
