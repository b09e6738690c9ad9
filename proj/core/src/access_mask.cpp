#include "aclaudit/access_mask.hpp"

#include <charconv>
#include <cstdio>

namespace aclaudit {

namespace {

struct RightInfo {
    std::string_view name;
    AccessMask mask;
    bool atomic;
};

constexpr std::array<RightInfo, kRightCount> kRightTable = {{
    {"ListDirectory", rights::kListDirectory, true},
    {"WriteData", rights::kWriteData, true},
    {"AppendData", rights::kAppendData, true},
    {"ReadExtendedAttributes", rights::kReadExtendedAttributes, true},
    {"WriteExtendedAttributes", rights::kWriteExtendedAttributes, true},
    {"Traverse", rights::kTraverse, true},
    {"DeleteSubdirectoriesAndFiles", rights::kDeleteSubdirectoriesAndFiles, true},
    {"ReadAttributes", rights::kReadAttributes, true},
    {"WriteAttributes", rights::kWriteAttributes, true},
    {"Write", rights::kWrite, false},
    {"Delete", rights::kDelete, true},
    {"ReadPermissions", rights::kReadPermissions, true},
    {"Read", rights::kRead, false},
    {"ReadAndExecute", rights::kReadAndExecute, false},
    {"Modify", rights::kModify, false},
    {"ChangePermissions", rights::kChangePermissions, true},
    {"TakeOwnership", rights::kTakeOwnership, true},
    {"Synchronize", rights::kSynchronize, true},
    {"FullControl", rights::kFullControl, false},
}};

}  // namespace

std::vector<ReportRight> atomic_rights() {
    std::vector<ReportRight> out;
    for (const auto r : kAllRights) {
        if (is_atomic(r)) out.push_back(r);
    }
    return out;
}

bool is_atomic(ReportRight right) noexcept { return kRightTable[index_of(right)].atomic; }
AccessMask right_mask(ReportRight right) noexcept { return kRightTable[index_of(right)].mask; }
std::string_view name_of(ReportRight right) noexcept { return kRightTable[index_of(right)].name; }

std::optional<ReportRight> parse_right(std::string_view name) noexcept {
    for (const auto r : kAllRights) {
        if (name_of(r) == name) return r;
    }
    return std::nullopt;
}

Decomposition decompose(AccessMask mask) {
    Decomposition d;
    for (const auto r : kAllRights) {
        if (is_atomic(r) && mask.contains(right_mask(r))) d.rights.push_back(r);
    }
    d.undefined = mask & ~rights::kDefined;
    return d;
}

std::vector<ReportRight> expand_basic(BasicPermission basic) {
    using R = ReportRight;
    switch (basic) {
        // Take Ownership is unchecked in every column of the Windows table,
        // Full Control included.
        case BasicPermission::FullControl:
            return {R::ListDirectory, R::WriteData, R::AppendData, R::ReadExtendedAttributes,
                    R::WriteExtendedAttributes, R::Traverse, R::DeleteSubdirectoriesAndFiles, R::ReadAttributes,
                    R::WriteAttributes, R::Delete, R::ReadPermissions, R::ChangePermissions};
        case BasicPermission::Modify:
            return {R::ListDirectory, R::WriteData, R::AppendData, R::ReadExtendedAttributes,
                    R::WriteExtendedAttributes, R::Traverse, R::ReadAttributes, R::WriteAttributes, R::Delete,
                    R::ReadPermissions};
        case BasicPermission::ReadAndExecute:
        case BasicPermission::ListFolderContents:
            return {R::ListDirectory, R::ReadExtendedAttributes, R::Traverse, R::ReadAttributes, R::ReadPermissions};
        case BasicPermission::Read:
            return {R::ListDirectory, R::ReadExtendedAttributes, R::ReadAttributes, R::ReadPermissions};
        case BasicPermission::Write:
            return {R::WriteData, R::AppendData, R::WriteExtendedAttributes, R::WriteAttributes, R::ReadPermissions};
    }
    return {};
}

std::string_view name_of(BasicPermission basic) noexcept {
    switch (basic) {
        case BasicPermission::FullControl: return "Full Control";
        case BasicPermission::Modify: return "Modify";
        case BasicPermission::ReadAndExecute: return "Read & Execute";
        case BasicPermission::ListFolderContents: return "List Folder Contents";
        case BasicPermission::Read: return "Read";
        case BasicPermission::Write: return "Write";
    }
    return "?";
}

std::string to_hex(AccessMask mask) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%x", static_cast<unsigned>(mask.bits()));
    return buf;
}

std::optional<AccessMask> parse_hex_mask(std::string_view text) noexcept {
    if (text.size() < 3 || text.size() > 10 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) return std::nullopt;
    std::uint32_t value = 0;
    const char* first = text.data() + 2;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value, 16);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return AccessMask(value);
}

}  // namespace aclaudit
