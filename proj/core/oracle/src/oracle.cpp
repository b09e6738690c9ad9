#include "aclaudit/oracle.hpp"

#include <cctype>
#include <set>
#include <vector>

namespace aclaudit::oracle {

namespace {

bool same_path(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto x = std::tolower(static_cast<unsigned char>(a[i] == '\\' ? '/' : a[i]));
        const auto y = std::tolower(static_cast<unsigned char>(b[i] == '\\' ? '/' : b[i]));
        if (x != y) return false;
    }
    return true;
}

bool find_chain(const FolderNode& node, std::string_view path, std::vector<const FolderNode*>& chain) {
    chain.push_back(&node);
    if (same_path(node.path, path)) return true;
    for (const auto& child : node.children) {
        if (find_chain(child, path, chain)) return true;
    }
    chain.pop_back();
    return false;
}

bool has(const Ace& ace, AceFlag flag) { return ace.flags.has(flag); }

// Stored list in evaluation order: explicit denies, explicit allows, then the
// ID-flagged entries as stored.
std::vector<Ace> own_list(const Dacl& dacl) {
    std::vector<Ace> out;
    for (const auto& a : dacl.aces) if (!has(a, AceFlag::Inherited) && a.type == AceType::Deny) out.push_back(a);
    for (const auto& a : dacl.aces) if (!has(a, AceFlag::Inherited) && a.type == AceType::Allow) out.push_back(a);
    for (const auto& a : dacl.aces) if (has(a, AceFlag::Inherited)) out.push_back(a);
    return out;
}

}  // namespace

OracleRow oracle_rights(const Snapshot& snapshot, const Sid& user, std::string_view folder) {
    const auto& principals = snapshot.directory.principals();

    bool known = user == well_known::kEveryone;
    for (const auto& p : principals) known = known || p.sid == user;
    if (!known) throw UnknownPrincipal(user.str());

    std::set<Sid> closure{user, well_known::kEveryone};
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& p : principals) {
            if (p.kind != PrincipalKind::Group || closure.contains(p.sid)) continue;
            for (const auto& m : p.members) {
                if (closure.contains(m)) {
                    closure.insert(p.sid);
                    grew = true;
                    break;
                }
            }
        }
    }

    std::vector<const FolderNode*> chain;
    if (!find_chain(snapshot.root, folder, chain)) throw UnknownPath(std::string(folder));

    bool present = true;
    std::vector<Ace> list;
    for (std::size_t depth = 0; depth < chain.size(); ++depth) {
        const SecurityDescriptor& sd = chain[depth]->sd;
        if (!sd.dacl.present) {
            present = false;
            list.clear();
            continue;
        }
        std::vector<Ace> next = own_list(sd.dacl);
        bool stored_inherited = false;
        for (const auto& a : sd.dacl.aces) stored_inherited = stored_inherited || has(a, AceFlag::Inherited);
        if (depth > 0 && present && !sd.is_protected && !stored_inherited) {
            for (Ace a : list) {
                const bool oi = has(a, AceFlag::ObjectInherit);
                const bool ci = has(a, AceFlag::ContainerInherit);
                const bool np = has(a, AceFlag::NoPropagate);
                std::uint8_t bits = a.flags.bits() | static_cast<std::uint8_t>(AceFlag::Inherited);
                if (ci && np) {
                    bits = static_cast<std::uint8_t>(AceFlag::Inherited);
                } else if (ci) {
                    bits &= ~static_cast<std::uint8_t>(AceFlag::InheritOnly);
                } else if (oi && !np) {
                    bits |= static_cast<std::uint8_t>(AceFlag::InheritOnly);
                } else {
                    continue;
                }
                a.flags = AceFlags::from_bits(bits);
                next.push_back(a);
            }
        }
        present = true;
        list = std::move(next);
    }

    OracleRow row{user, chain.back()->path, {}};
    std::array<bool, 32> bit_allowed{};
    for (int bit = 0; bit < 32; ++bit) {
        const std::uint32_t b = 1u << bit;
        if (!present) {
            bit_allowed[bit] = true;
            continue;
        }
        for (const auto& a : list) {
            if (has(a, AceFlag::InheritOnly) || !closure.contains(a.sid) || !(a.mask.bits() & b)) continue;
            bit_allowed[bit] = a.type == AceType::Allow;
            break;
        }
    }
    for (const auto r : kAllRights) {
        bool all = true;
        for (int bit = 0; bit < 32; ++bit) {
            if (right_mask(r).bits() & (1u << bit)) all = all && bit_allowed[bit];
        }
        row.values[index_of(r)] = all;
    }
    return row;
}

}  // namespace aclaudit::oracle
