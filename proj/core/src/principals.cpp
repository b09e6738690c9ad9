#include "aclaudit/principals.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace aclaudit {

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

std::optional<Sid> Sid::parse(std::string_view text) {
    if (text.substr(0, 4) != "S-1-") return std::nullopt;
    std::string canonical = "S-1";
    std::size_t pos = 4;
    std::size_t components = 0;
    while (true) {
        const std::size_t end = std::min(text.find('-', pos), text.size());
        const std::string_view part = text.substr(pos, end - pos);
        if (part.empty() || part.size() > 20) return std::nullopt;
        if (!std::all_of(part.begin(), part.end(), [](unsigned char c) { return std::isdigit(c); })) return std::nullopt;
        const std::size_t nz = part.find_first_not_of('0');
        canonical += '-';
        canonical += nz == std::string_view::npos ? std::string_view("0") : part.substr(nz);
        ++components;
        if (end == text.size()) break;
        pos = end + 1;
    }
    if (components < 2) return std::nullopt;
    return Sid(std::move(canonical));
}

Sid Sid::from_string(std::string_view text) {
    auto sid = parse(text);
    if (!sid) throw ParseError("malformed SID: " + std::string(text));
    return *std::move(sid);
}

namespace well_known {
const Sid kEveryone = Sid::from_string("S-1-1-0");
const Sid kNull = Sid::from_string("S-1-0-0");
const Sid kLocalSystem = Sid::from_string("S-1-5-18");
const Sid kAuthenticatedUsers = Sid::from_string("S-1-5-11");
const Sid kAdministrators = Sid::from_string("S-1-5-32-544");
}  // namespace well_known

bool is_well_known(const Sid& sid) noexcept {
    using namespace well_known;
    return sid == kEveryone || sid == kNull || sid == kLocalSystem || sid == kAuthenticatedUsers ||
           sid == kAdministrators;
}

std::string_view Principal::short_name() const noexcept {
    const std::string_view n = name;
    const auto slash = n.rfind('\\');
    return slash == std::string_view::npos ? n : n.substr(slash + 1);
}

Directory::Directory(std::string domain, std::vector<Principal> principals)
    : domain_(std::move(domain)), principals_(std::move(principals)), member_of_(principals_.size() + 1) {
    for (std::size_t i = 0; i < principals_.size(); ++i) {
        const auto& p = principals_[i];
        by_sid_.emplace(p.sid.str(), i);  // first wins; duplicates surface in validate_directory
        by_name_[to_lower(p.name)].push_back(i);
        for (const auto& alias : p.aliases) {
            auto& slot = by_name_[to_lower(alias)];
            if (std::find(slot.begin(), slot.end(), i) == slot.end()) slot.push_back(i);
        }
    }
    for (std::size_t g = 0; g < principals_.size(); ++g) {
        for (const auto& member : principals_[g].members) {
            if (auto m = index_of(member); m && *m < principals_.size()) member_of_[*m].push_back(g);
        }
    }
}

const Principal* Directory::find(const Sid& sid) const {
    const auto it = by_sid_.find(sid.str());
    return it == by_sid_.end() ? nullptr : &principals_[it->second];
}

std::optional<std::size_t> Directory::index_of(const Sid& sid) const {
    const auto it = by_sid_.find(sid.str());
    if (it != by_sid_.end()) return it->second;
    if (sid == well_known::kEveryone) return everyone_index();
    return std::nullopt;
}

std::vector<std::size_t> Directory::lookup_name(std::string_view name) const {
    const auto it = by_name_.find(to_lower(name));
    return it == by_name_.end() ? std::vector<std::size_t>{} : it->second;
}

const Principal& everyone_principal() {
    static const Principal everyone{well_known::kEveryone, "Everyone", PrincipalKind::Group, {}, {}};
    return everyone;
}

const Principal& resolve_principal(const Directory& directory, std::string_view key) {
    if (key.substr(0, 4) == "S-1-") {
        // Exact textual match only: SIDs are case-sensitive and canonical.
        const auto sid = Sid::parse(key);
        if (!sid || sid->str() != key) throw UnknownPrincipal(std::string(key));
        if (*sid == well_known::kEveryone) return everyone_principal();
        if (const auto* p = directory.find(*sid)) return *p;
        throw UnknownPrincipal(std::string(key));
    }
    if (iequals(key, "Everyone") || iequals(key, "\\Everyone")) return everyone_principal();

    auto unique = [&](const std::vector<std::size_t>& hits) -> const Principal* {
        if (hits.empty()) return nullptr;
        if (hits.size() > 1) throw AmbiguousName(std::string(key));
        return &directory.principals()[hits.front()];
    };

    if (key.find('\\') != std::string_view::npos) {
        if (const auto* p = unique(directory.lookup_name(key))) return *p;
        throw UnknownPrincipal(std::string(key));
    }

    if (!directory.domain().empty()) {
        if (const auto* p = unique(directory.lookup_name(directory.domain() + "\\" + std::string(key)))) return *p;
    }
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < directory.size(); ++i) {
        const auto& p = directory.principals()[i];
        bool match = iequals(p.short_name(), key);
        for (const auto& alias : p.aliases) {
            const std::string_view a = alias;
            const auto slash = a.rfind('\\');
            match = match || iequals(slash == std::string_view::npos ? a : a.substr(slash + 1), key);
        }
        if (match) hits.push_back(i);
    }
    if (const auto* p = unique(hits)) return *p;
    throw UnknownPrincipal(std::string(key));
}

std::set<Sid> membership_closure(const Directory& directory, const Sid& user) {
    std::set<Sid> closure{user, well_known::kEveryone};
    if (user == well_known::kEveryone) return closure;
    const auto start = directory.index_of(user);
    if (!start) throw UnknownPrincipal(user.str());

    std::vector<bool> seen(directory.size() + 1, false);
    std::deque<std::size_t> queue{*start};
    seen[*start] = true;
    while (!queue.empty()) {
        const std::size_t current = queue.front();
        queue.pop_front();
        for (const std::size_t group : directory.direct_groups(current)) {
            if (seen[group]) continue;
            seen[group] = true;
            closure.insert(directory.principals()[group].sid);
            queue.push_back(group);
        }
    }
    return closure;
}

std::vector<Defect> validate_directory(const Directory& directory) {
    std::vector<Defect> defects;
    std::unordered_map<std::string, std::size_t> sids;
    std::unordered_map<std::string, std::size_t> names;
    for (std::size_t i = 0; i < directory.size(); ++i) {
        const auto& p = directory.principals()[i];
        if (p.sid == well_known::kEveryone || p.sid == well_known::kNull) {
            defects.push_back({Defect::Kind::ReservedSid, p.sid.str(), "reserved SID cannot be stored"});
        }
        if (!sids.emplace(p.sid.str(), i).second) {
            defects.push_back({Defect::Kind::DuplicateSid, p.sid.str(), p.name});
        }
        if (!names.emplace(to_lower(p.name), i).second) {
            defects.push_back({Defect::Kind::DuplicateName, p.name, "name used by more than one principal"});
        }
        if (p.kind == PrincipalKind::User && !p.members.empty()) {
            defects.push_back({Defect::Kind::UserHasMembers, p.name, "users cannot have members"});
        }
        for (const auto& m : p.members) {
            if (!directory.find(m)) {
                defects.push_back({Defect::Kind::DanglingMember, p.name, "member " + m.str() + " not in directory"});
            }
        }
    }
    return defects;
}

}  // namespace aclaudit
