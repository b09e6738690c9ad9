#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aclaudit {

/// 32-bit NTFS folder access mask.
class AccessMask {
public:
    constexpr AccessMask() = default;
    constexpr explicit AccessMask(std::uint32_t bits) : bits_(bits) {}

    constexpr std::uint32_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr bool contains(AccessMask other) const noexcept { return (bits_ & other.bits_) == other.bits_; }
    constexpr bool intersects(AccessMask other) const noexcept { return (bits_ & other.bits_) != 0; }

    friend constexpr AccessMask operator|(AccessMask a, AccessMask b) noexcept { return AccessMask(a.bits_ | b.bits_); }
    friend constexpr AccessMask operator&(AccessMask a, AccessMask b) noexcept { return AccessMask(a.bits_ & b.bits_); }
    constexpr AccessMask operator~() const noexcept { return AccessMask(~bits_); }
    constexpr AccessMask& operator|=(AccessMask o) noexcept { bits_ |= o.bits_; return *this; }
    constexpr AccessMask& operator&=(AccessMask o) noexcept { bits_ &= o.bits_; return *this; }

    constexpr bool operator==(const AccessMask&) const = default;

private:
    std::uint32_t bits_ = 0;
};

namespace rights {
inline constexpr AccessMask kListDirectory{0x1};
inline constexpr AccessMask kWriteData{0x2};
inline constexpr AccessMask kAppendData{0x4};
inline constexpr AccessMask kReadExtendedAttributes{0x8};
inline constexpr AccessMask kWriteExtendedAttributes{0x10};
inline constexpr AccessMask kTraverse{0x20};
inline constexpr AccessMask kDeleteSubdirectoriesAndFiles{0x40};
inline constexpr AccessMask kReadAttributes{0x80};
inline constexpr AccessMask kWriteAttributes{0x100};
inline constexpr AccessMask kDelete{0x10000};
inline constexpr AccessMask kReadPermissions{0x20000};
inline constexpr AccessMask kChangePermissions{0x40000};
inline constexpr AccessMask kTakeOwnership{0x80000};
inline constexpr AccessMask kSynchronize{0x100000};

inline constexpr AccessMask kRead{0x20089};
inline constexpr AccessMask kReadAndExecute{0x200A9};
inline constexpr AccessMask kWrite{0x116};
inline constexpr AccessMask kModify{0x301BF};
inline constexpr AccessMask kFullControl{0x1F01FF};

/// Union of every storable bit.
inline constexpr AccessMask kDefined{0x1F01FF};

// Generic file aliases (Read/Write/Execute plus SYNCHRONIZE, as Windows stores them).
inline constexpr AccessMask kFileGenericRead{0x120089};
inline constexpr AccessMask kFileGenericWrite{0x120116};
inline constexpr AccessMask kFileGenericExecute{0x1200A0};
}  // namespace rights

/// The 19 report columns, in report order.
enum class ReportRight : std::uint8_t {
    ListDirectory,
    WriteData,
    AppendData,
    ReadExtendedAttributes,
    WriteExtendedAttributes,
    Traverse,
    DeleteSubdirectoriesAndFiles,
    ReadAttributes,
    WriteAttributes,
    Write,
    Delete,
    ReadPermissions,
    Read,
    ReadAndExecute,
    Modify,
    ChangePermissions,
    TakeOwnership,
    Synchronize,
    FullControl,
};

inline constexpr std::size_t kRightCount = 19;

inline constexpr std::array<ReportRight, kRightCount> kAllRights = {
    ReportRight::ListDirectory,          ReportRight::WriteData,
    ReportRight::AppendData,             ReportRight::ReadExtendedAttributes,
    ReportRight::WriteExtendedAttributes, ReportRight::Traverse,
    ReportRight::DeleteSubdirectoriesAndFiles, ReportRight::ReadAttributes,
    ReportRight::WriteAttributes,        ReportRight::Write,
    ReportRight::Delete,                 ReportRight::ReadPermissions,
    ReportRight::Read,                   ReportRight::ReadAndExecute,
    ReportRight::Modify,                 ReportRight::ChangePermissions,
    ReportRight::TakeOwnership,          ReportRight::Synchronize,
    ReportRight::FullControl,
};

constexpr std::size_t index_of(ReportRight r) noexcept { return static_cast<std::size_t>(r); }

/// Single-bit rights, in report order.
std::vector<ReportRight> atomic_rights();

bool is_atomic(ReportRight right) noexcept;
AccessMask right_mask(ReportRight right) noexcept;
std::string_view name_of(ReportRight right) noexcept;
std::optional<ReportRight> parse_right(std::string_view name) noexcept;

struct Decomposition {
    std::vector<ReportRight> rights;  // atomic, report order
    AccessMask undefined;             // bits outside kDefined

    bool has_undefined() const noexcept { return !undefined.empty(); }
};

Decomposition decompose(AccessMask mask);

/// The six basic permissions of the Windows security tab.
enum class BasicPermission { FullControl, Modify, ReadAndExecute, ListFolderContents, Read, Write };

inline constexpr std::array<BasicPermission, 6> kAllBasicPermissions = {
    BasicPermission::FullControl, BasicPermission::Modify, BasicPermission::ReadAndExecute,
    BasicPermission::ListFolderContents, BasicPermission::Read, BasicPermission::Write,
};

/// Special permissions checked under a basic permission column, in report order.
std::vector<ReportRight> expand_basic(BasicPermission basic);
std::string_view name_of(BasicPermission basic) noexcept;

/// Lowercase "0x..." text.
std::string to_hex(AccessMask mask);
/// Accepts "0x" followed by 1-8 hex digits, either case.
std::optional<AccessMask> parse_hex_mask(std::string_view text) noexcept;

}  // namespace aclaudit
