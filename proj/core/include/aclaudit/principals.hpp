#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aclaudit/error.hpp"

namespace aclaudit {

/// Security identifier in canonical "S-1-<authority>-<subauthority>..." text.
class Sid {
public:
    /// Parses and canonicalizes (drops leading zeros). Returns nullopt when the
    /// text is not a SID.
    static std::optional<Sid> parse(std::string_view text);
    /// Like parse() but throws ParseError.
    static Sid from_string(std::string_view text);

    const std::string& str() const noexcept { return text_; }

    bool operator==(const Sid&) const = default;
    auto operator<=>(const Sid&) const = default;

private:
    explicit Sid(std::string text) : text_(std::move(text)) {}
    std::string text_;
};

namespace well_known {
extern const Sid kEveryone;           // S-1-1-0, WD
extern const Sid kNull;               // S-1-0-0, never in any closure
extern const Sid kLocalSystem;        // S-1-5-18, SY
extern const Sid kAuthenticatedUsers; // S-1-5-11, AU
extern const Sid kAdministrators;     // S-1-5-32-544, BA
}  // namespace well_known

bool is_well_known(const Sid& sid) noexcept;

enum class PrincipalKind { User, Group };

struct Principal {
    Sid sid;
    std::string name;  // "DOMAIN\name"
    PrincipalKind kind = PrincipalKind::User;
    std::vector<Sid> members;
    /// Alternate account spellings, e.g. the logon name "CORUH\usera".
    std::vector<std::string> aliases;

    /// Part after the backslash.
    std::string_view short_name() const noexcept;

    bool operator==(const Principal&) const = default;
};

/// Immutable store of users and groups. Everyone is implicit and never stored.
class Directory {
public:
    Directory() = default;
    Directory(std::string domain, std::vector<Principal> principals);

    const std::string& domain() const noexcept { return domain_; }
    const std::vector<Principal>& principals() const noexcept { return principals_; }
    std::size_t size() const noexcept { return principals_.size(); }

    const Principal* find(const Sid& sid) const;
    /// Dense index of a stored principal; Everyone maps to everyone_index().
    std::optional<std::size_t> index_of(const Sid& sid) const;
    std::size_t everyone_index() const noexcept { return principals_.size(); }

    /// Groups that list `sid` as a direct member.
    const std::vector<std::size_t>& direct_groups(std::size_t index) const { return member_of_[index]; }

    /// Principals whose name or alias equals `name` (case-insensitive).
    std::vector<std::size_t> lookup_name(std::string_view name) const;

    bool operator==(const Directory& other) const {
        return domain_ == other.domain_ && principals_ == other.principals_;
    }

private:
    std::string domain_;
    std::vector<Principal> principals_;
    std::unordered_map<std::string, std::size_t> by_sid_;
    std::unordered_map<std::string, std::vector<std::size_t>> by_name_;  // lowercased
    std::vector<std::vector<std::size_t>> member_of_;
};

/// The implicit Everyone group.
const Principal& everyone_principal();

/// Resolves a SID string, "DOMAIN\name" or bare name. Names are matched
/// case-insensitively, SIDs exactly. A bare name is tried in the directory's
/// default domain first.
const Principal& resolve_principal(const Directory& directory, std::string_view key);

/// {user} plus every group reachable through nested membership plus Everyone.
/// Cycles are tolerated.
std::set<Sid> membership_closure(const Directory& directory, const Sid& user);

std::vector<Defect> validate_directory(const Directory& directory);

std::string to_lower(std::string_view text);
bool iequals(std::string_view a, std::string_view b) noexcept;

}  // namespace aclaudit

template <>
struct std::hash<aclaudit::Sid> {
    std::size_t operator()(const aclaudit::Sid& sid) const noexcept { return std::hash<std::string>{}(sid.str()); }
};
