#include "aclaudit/evaluator.hpp"

#include <algorithm>
#include <thread>

namespace aclaudit {

namespace {

struct WalkResult {
    bool allowed = false;
    std::optional<std::size_t> deciding;
};

// The ordered access check shared by every entry point. `view(i)` yields
// {matches, deny, mask bits} for ACE i; non-matching entries are skipped.
template <typename View>
WalkResult remaining_bits_walk(std::size_t count, View&& view, std::uint32_t requested, std::uint64_t& visits) {
    std::uint32_t remaining = requested;
    for (std::size_t i = 0; i < count; ++i) {
        ++visits;
        const auto [matches, deny, mask] = view(i);
        if (!matches) continue;
        if (deny) {
            if (mask & remaining) return {false, i};
        } else {
            remaining &= ~mask;
            if (remaining == 0) return {true, std::nullopt};
        }
    }
    return {false, std::nullopt};
}

struct AceView {
    bool matches;
    bool deny;
    std::uint32_t mask;
};

}  // namespace

AccessDecision access_check(const std::set<Sid>& closure, const EffectiveDacl& dacl, AccessMask requested) {
    if (requested.empty()) throw EmptyRequest();
    if (!dacl.present) return {Outcome::Allowed, std::nullopt, {}};
    std::uint64_t visits = 0;
    const auto result = remaining_bits_walk(
        dacl.aces.size(),
        [&](std::size_t i) {
            const Ace& ace = dacl.aces[i].ace;
            return AceView{!ace.is_inherit_only() && closure.contains(ace.sid), ace.is_deny(), ace.mask.bits()};
        },
        requested.bits(), visits);
    AccessDecision decision{result.allowed ? Outcome::Allowed : Outcome::Denied, result.deciding, {}};
    if (result.deciding) decision.source = dacl.aces[*result.deciding].source;
    return decision;
}

AccessDecision access_check(const std::set<Sid>& closure, const Dacl& dacl, AccessMask requested) {
    if (requested.empty()) throw EmptyRequest();
    if (!dacl.present) return {Outcome::Allowed, std::nullopt, {}};
    std::uint64_t visits = 0;
    const auto result = remaining_bits_walk(
        dacl.aces.size(),
        [&](std::size_t i) {
            const Ace& ace = dacl.aces[i];
            return AceView{!ace.is_inherit_only() && closure.contains(ace.sid), ace.is_deny(), ace.mask.bits()};
        },
        requested.bits(), visits);
    return {result.allowed ? Outcome::Allowed : Outcome::Denied, result.deciding, {}};
}

struct Evaluator::CompiledDacl {
    struct Entry {
        std::int64_t principal;  // -1 never matches
        std::uint32_t mask;
        bool deny;
    };

    EffectiveDacl dacl;
    std::vector<Entry> entries;      // inherit-only entries dropped
    std::vector<std::size_t> origin; // entries[k] came from dacl.aces[origin[k]]
};

Evaluator::Evaluator(const Snapshot& snapshot) : snapshot_(snapshot), index_(snapshot.root) {
    dacls_.resize(index_.size());
}

Evaluator::~Evaluator() = default;

const Evaluator::Closure& Evaluator::closure_for(const Sid& user) {
    if (const auto it = closures_.find(user); it != closures_.end()) return it->second;
    const Directory& dir = snapshot_.directory;
    Closure flags(dir.size() + 1, 0);
    for (const Sid& sid : membership_closure(dir, user)) {
        if (const auto i = dir.index_of(sid)) flags[*i] = 1;
    }
    ++stats_.closure_computations;
    return closures_.emplace(user, std::move(flags)).first->second;
}

const Evaluator::CompiledDacl& Evaluator::dacl_for(std::size_t folder) {
    if (dacls_[folder]) return *dacls_[folder];
    const FolderNode& node = index_.node(folder);
    auto compiled = std::make_unique<CompiledDacl>();
    if (const auto parent = index_.parent(folder)) {
        compiled->dacl = propagate_step(dacl_for(*parent).dacl, node.sd, node.path, index_.depth(folder));
    } else {
        compiled->dacl = root_effective_dacl(node.sd, node.path);
    }
    const Directory& dir = snapshot_.directory;
    for (std::size_t i = 0; i < compiled->dacl.aces.size(); ++i) {
        const Ace& ace = compiled->dacl.aces[i].ace;
        if (ace.is_inherit_only()) continue;
        const auto principal = dir.index_of(ace.sid);
        compiled->entries.push_back(
            {principal ? static_cast<std::int64_t>(*principal) : -1, ace.mask.bits(), ace.is_deny()});
        compiled->origin.push_back(i);
    }
    ++stats_.dacl_computations;
    dacls_[folder] = std::move(compiled);
    return *dacls_[folder];
}

std::string Evaluator::display_name(const Sid& user) const {
    if (user == well_known::kEveryone) return everyone_principal().name;
    if (const auto* p = snapshot_.directory.find(user)) return std::string(p->short_name());
    return user.str();
}

void Evaluator::fill_row(const Closure& closure, const CompiledDacl& compiled, std::span<const ReportRight> rights,
                         EffectiveRightsRow& row, std::uint64_t& visits) const {
    for (const ReportRight r : rights) {
        if (!compiled.dacl.present) {
            row.values[index_of(r)] = true;
            continue;
        }
        const auto result = remaining_bits_walk(
            compiled.entries.size(),
            [&](std::size_t i) {
                const auto& e = compiled.entries[i];
                return AceView{e.principal >= 0 && closure[static_cast<std::size_t>(e.principal)] != 0, e.deny, e.mask};
            },
            right_mask(r).bits(), visits);
        row.values[index_of(r)] = result.allowed;
    }
}

EffectiveRightsRow Evaluator::effective_rights(const Sid& user, std::string_view folder) {
    const std::size_t f = index_.at(folder);
    const Closure& closure = closure_for(user);
    const CompiledDacl& compiled = dacl_for(f);
    EffectiveRightsRow row{user, display_name(user), index_.node(f).path, {}};
    fill_row(closure, compiled, kAllRights, row, stats_.ace_visits);
    return row;
}

AccessDecision Evaluator::check(const Sid& user, std::string_view folder, AccessMask requested) {
    if (requested.empty()) throw EmptyRequest();
    const std::size_t f = index_.at(folder);
    const Closure& closure = closure_for(user);
    const CompiledDacl& compiled = dacl_for(f);
    if (!compiled.dacl.present) return {Outcome::Allowed, std::nullopt, {}};
    const auto result = remaining_bits_walk(
        compiled.entries.size(),
        [&](std::size_t i) {
            const auto& e = compiled.entries[i];
            return AceView{e.principal >= 0 && closure[static_cast<std::size_t>(e.principal)] != 0, e.deny, e.mask};
        },
        requested.bits(), stats_.ace_visits);
    AccessDecision decision{result.allowed ? Outcome::Allowed : Outcome::Denied, std::nullopt, {}};
    if (result.deciding) {
        const std::size_t ace = compiled.origin[*result.deciding];
        decision.ace_index = ace;
        decision.source = compiled.dacl.aces[ace].source;
    }
    return decision;
}

const EffectiveDacl& Evaluator::effective_dacl_of(std::string_view folder) { return dacl_for(index_.at(folder)).dacl; }

RightsMatrix Evaluator::build_matrix(std::span<const Sid> users, std::span<const std::string> folders,
                                     std::span<const ReportRight> rights, unsigned threads) {
    RightsMatrix matrix;
    for (const ReportRight r : rights) {
        if (std::find(matrix.rights.begin(), matrix.rights.end(), r) == matrix.rights.end()) matrix.rights.push_back(r);
    }

    std::vector<Sid> user_list;
    for (const Sid& u : users) {
        if (std::find(user_list.begin(), user_list.end(), u) == user_list.end()) user_list.push_back(u);
    }
    std::vector<std::size_t> folder_list;
    for (const auto& path : folders) {
        const std::size_t f = index_.at(path);
        if (std::find(folder_list.begin(), folder_list.end(), f) == folder_list.end()) folder_list.push_back(f);
    }
    std::stable_sort(folder_list.begin(), folder_list.end(), [&](std::size_t a, std::size_t b) {
        const auto la = to_lower(index_.node(a).path);
        const auto lb = to_lower(index_.node(b).path);
        return la != lb ? la < lb : index_.node(a).path < index_.node(b).path;
    });

    // Caches are filled serially; rows then only read them.
    std::vector<const Closure*> closures;
    closures.reserve(user_list.size());
    for (const Sid& u : user_list) closures.push_back(&closure_for(u));
    std::vector<const CompiledDacl*> dacls;
    dacls.reserve(folder_list.size());
    for (const std::size_t f : folder_list) dacls.push_back(&dacl_for(f));

    const std::size_t nf = folder_list.size();
    matrix.rows.resize(user_list.size() * nf);
    for (std::size_t u = 0; u < user_list.size(); ++u) {
        const std::string name = display_name(user_list[u]);
        for (std::size_t f = 0; f < nf; ++f) {
            auto& row = matrix.rows[u * nf + f];
            row.user = user_list[u];
            row.user_name = name;
            row.folder = index_.node(folder_list[f]).path;
        }
    }

    const std::size_t total = matrix.rows.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total ? total : 1)));
    std::vector<std::uint64_t> visits(workers, 0);
    auto work = [&](unsigned w) {
        for (std::size_t k = w; k < total; k += workers) {
            fill_row(*closures[k / nf], *dacls[k % nf], matrix.rights, matrix.rows[k], visits[w]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto v : visits) stats_.ace_visits += v;
    return matrix;
}

EffectiveRightsRow effective_rights(const Snapshot& snapshot, const Sid& user, std::string_view folder) {
    Evaluator evaluator(snapshot);
    return evaluator.effective_rights(user, folder);
}

RightsMatrix build_matrix(const Snapshot& snapshot, std::span<const Sid> users, std::span<const std::string> folders,
                          std::span<const ReportRight> rights) {
    Evaluator evaluator(snapshot);
    return evaluator.build_matrix(users, folders, rights);
}

}  // namespace aclaudit
