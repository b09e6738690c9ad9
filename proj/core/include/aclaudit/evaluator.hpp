#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aclaudit/access_mask.hpp"
#include "aclaudit/ace_model.hpp"
#include "aclaudit/inheritance.hpp"
#include "aclaudit/snapshot.hpp"

namespace aclaudit {

enum class Outcome { Allowed, Denied };

struct AccessDecision {
    Outcome outcome = Outcome::Denied;
    /// Set when a deny ACE decided; absent for grants and implicit denial.
    std::optional<std::size_t> ace_index;
    std::string source;  // folder the deciding ACE was written on

    bool allowed() const noexcept { return outcome == Outcome::Allowed; }
};

/// Walks the ACEs in stored order. Inherit-only entries and entries for SIDs
/// outside `closure` are skipped. A deny touching any still-ungranted bit
/// denies; allows clear bits until nothing remains. A null DACL allows.
/// Throws EmptyRequest for a zero mask.
AccessDecision access_check(const std::set<Sid>& closure, const EffectiveDacl& dacl, AccessMask requested);
AccessDecision access_check(const std::set<Sid>& closure, const Dacl& dacl, AccessMask requested);

struct EffectiveRightsRow {
    Sid user = well_known::kEveryone;
    std::string user_name;  // account name without the domain
    std::string folder;
    std::array<bool, kRightCount> values{};

    bool value(ReportRight r) const noexcept { return values[index_of(r)]; }
    bool operator==(const EffectiveRightsRow&) const = default;
};

/// Rows ordered by user input order, then folder path.
struct RightsMatrix {
    std::vector<ReportRight> rights;  // the columns that were evaluated
    std::vector<EffectiveRightsRow> rows;

    bool operator==(const RightsMatrix&) const = default;
};

struct EvaluatorStats {
    std::size_t closure_computations = 0;
    std::size_t dacl_computations = 0;
    std::uint64_t ace_visits = 0;
};

/// Effective-rights engine over one snapshot. Caches each user's closure and
/// each folder's effective DACL the first time they are needed. Not
/// thread-safe itself; build_matrix parallelizes internally.
class Evaluator {
public:
    explicit Evaluator(const Snapshot& snapshot);
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    const Snapshot& snapshot() const noexcept { return snapshot_; }
    const FolderIndex& folders() const noexcept { return index_; }

    /// Throws UnknownPrincipal / UnknownPath.
    EffectiveRightsRow effective_rights(const Sid& user, std::string_view folder);
    AccessDecision check(const Sid& user, std::string_view folder, AccessMask requested);
    const EffectiveDacl& effective_dacl_of(std::string_view folder);

    /// One row per (user, folder). Duplicate users or folders are dropped.
    RightsMatrix build_matrix(std::span<const Sid> users, std::span<const std::string> folders,
                              std::span<const ReportRight> rights, unsigned threads = 1);

    const EvaluatorStats& stats() const noexcept { return stats_; }

private:
    struct CompiledDacl;
    using Closure = std::vector<std::uint8_t>;

    const Closure& closure_for(const Sid& user);
    const CompiledDacl& dacl_for(std::size_t folder);
    std::string display_name(const Sid& user) const;
    void fill_row(const Closure& closure, const CompiledDacl& dacl, std::span<const ReportRight> rights,
                  EffectiveRightsRow& row, std::uint64_t& visits) const;

    const Snapshot& snapshot_;
    FolderIndex index_;
    std::vector<std::unique_ptr<CompiledDacl>> dacls_;
    std::unordered_map<Sid, Closure> closures_;
    EvaluatorStats stats_;
};

EffectiveRightsRow effective_rights(const Snapshot& snapshot, const Sid& user, std::string_view folder);
RightsMatrix build_matrix(const Snapshot& snapshot, std::span<const Sid> users, std::span<const std::string> folders,
                          std::span<const ReportRight> rights);

}  // namespace aclaudit
