#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aclaudit/access_mask.hpp"
#include "aclaudit/principals.hpp"

namespace aclaudit {

enum class AceType : std::uint8_t { Allow, Deny };

/// Inheritance flags, using the on-disk ACE header bit values.
enum class AceFlag : std::uint8_t {
    ObjectInherit = 0x01,     // OI
    ContainerInherit = 0x02,  // CI
    NoPropagate = 0x04,       // NP
    InheritOnly = 0x08,       // IO
    Inherited = 0x10,         // ID
};

class AceFlags {
public:
    constexpr AceFlags() = default;
    constexpr AceFlags(std::initializer_list<AceFlag> flags) {
        for (auto f : flags) bits_ |= static_cast<std::uint8_t>(f);
    }
    static constexpr AceFlags from_bits(std::uint8_t bits) {
        AceFlags f;
        f.bits_ = bits & 0x1F;
        return f;
    }

    constexpr std::uint8_t bits() const noexcept { return bits_; }
    constexpr bool has(AceFlag f) const noexcept { return bits_ & static_cast<std::uint8_t>(f); }
    constexpr AceFlags& set(AceFlag f) noexcept { bits_ |= static_cast<std::uint8_t>(f); return *this; }
    constexpr AceFlags& clear(AceFlag f) noexcept { bits_ &= ~static_cast<std::uint8_t>(f); return *this; }
    constexpr bool operator==(const AceFlags&) const = default;

private:
    std::uint8_t bits_ = 0;
};

struct Ace {
    AceType type = AceType::Allow;
    Sid sid = well_known::kEveryone;
    AccessMask mask;
    AceFlags flags;

    bool is_deny() const noexcept { return type == AceType::Deny; }
    bool is_inherited() const noexcept { return flags.has(AceFlag::Inherited); }
    bool is_inherit_only() const noexcept { return flags.has(AceFlag::InheritOnly); }

    bool operator==(const Ace&) const = default;
};

struct Dacl {
    /// false is a null DACL (grants everything); aces is then empty.
    bool present = true;
    std::vector<Ace> aces;

    static Dacl null() { return Dacl{false, {}}; }
    bool operator==(const Dacl&) const = default;
};

struct SecurityDescriptor {
    std::optional<Sid> owner;
    std::optional<Sid> group;
    Dacl dacl;
    bool is_protected = false;

    /// Clears the protected bit when the DACL is null.
    SecurityDescriptor& normalize() {
        if (!dacl.present) {
            dacl.aces.clear();
            is_protected = false;
        }
        return *this;
    }

    bool operator==(const SecurityDescriptor&) const = default;
};

/// 0 explicit deny, 1 explicit allow, 2 inherited deny, 3 inherited allow.
int precedence_block(const Ace& ace) noexcept;

/// Stable reorder into the four precedence blocks. Throws NullDacl.
Dacl canonicalize(const Dacl& dacl);
bool is_canonical(const std::vector<Ace>& aces) noexcept;

std::vector<Defect> validate_sd(const SecurityDescriptor& sd, const Directory& directory);

std::string flags_to_string(AceFlags flags);  // e.g. "OI|CI|ID"

}  // namespace aclaudit
