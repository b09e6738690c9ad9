#include "aclaudit/ace_model.hpp"

#include <algorithm>

namespace aclaudit {

int precedence_block(const Ace& ace) noexcept {
    return (ace.is_inherited() ? 2 : 0) + (ace.is_deny() ? 0 : 1);
}

Dacl canonicalize(const Dacl& dacl) {
    if (!dacl.present) throw NullDacl();
    Dacl out = dacl;
    std::stable_sort(out.aces.begin(), out.aces.end(),
                     [](const Ace& a, const Ace& b) { return precedence_block(a) < precedence_block(b); });
    return out;
}

bool is_canonical(const std::vector<Ace>& aces) noexcept {
    return std::is_sorted(aces.begin(), aces.end(),
                          [](const Ace& a, const Ace& b) { return precedence_block(a) < precedence_block(b); });
}

std::vector<Defect> validate_sd(const SecurityDescriptor& sd, const Directory& directory) {
    std::vector<Defect> defects;
    auto known = [&](const Sid& sid) { return is_well_known(sid) || directory.find(sid) != nullptr; };
    if (sd.owner && !known(*sd.owner)) defects.push_back({Defect::Kind::UnknownSid, sd.owner->str(), "owner"});
    if (sd.group && !known(*sd.group)) defects.push_back({Defect::Kind::UnknownSid, sd.group->str(), "group"});

    for (std::size_t i = 0; i < sd.dacl.aces.size(); ++i) {
        const Ace& ace = sd.dacl.aces[i];
        const std::string where = "ace " + std::to_string(i);
        if (ace.mask.empty()) defects.push_back({Defect::Kind::ZeroMask, where, ""});
        if (const auto extra = ace.mask & ~rights::kDefined; !extra.empty()) {
            defects.push_back({Defect::Kind::UndefinedBits, where, to_hex(extra)});
        }
        if (!known(ace.sid)) defects.push_back({Defect::Kind::UnknownSid, where, ace.sid.str()});
        if (ace.is_inherit_only() && !ace.flags.has(AceFlag::ObjectInherit) &&
            !ace.flags.has(AceFlag::ContainerInherit)) {
            defects.push_back({Defect::Kind::OrphanInheritOnly, where, "IO without OI or CI"});
        }
    }
    return defects;
}

std::string flags_to_string(AceFlags flags) {
    static constexpr std::pair<AceFlag, const char*> kNames[] = {
        {AceFlag::ObjectInherit, "OI"}, {AceFlag::ContainerInherit, "CI"}, {AceFlag::NoPropagate, "NP"},
        {AceFlag::InheritOnly, "IO"},   {AceFlag::Inherited, "ID"},
    };
    std::string out;
    for (const auto& [flag, name] : kNames) {
        if (!flags.has(flag)) continue;
        if (!out.empty()) out += '|';
        out += name;
    }
    return out;
}

}  // namespace aclaudit
