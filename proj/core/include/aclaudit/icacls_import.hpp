#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "aclaudit/ace_model.hpp"
#include "aclaudit/snapshot.hpp"

namespace aclaudit {

/// One "account:(flag)...(right)" entry of an icacls listing.
struct IcaclsEntry {
    std::string account;
    bool deny = false;
    AceFlags flags;           // (I) maps to ID
    std::string right_token;  // F, M, RX, R, W or D

    bool operator==(const IcaclsEntry&) const = default;
};

struct IcaclsFolder {
    std::string path;  // as printed
    std::vector<IcaclsEntry> entries;

    bool operator==(const IcaclsFolder&) const = default;
};

/// Parses `icacls <path> /t` output. Blank lines and the trailing
/// "Successfully processed ..." summary are skipped. Throws IcaclsError.
std::vector<IcaclsFolder> parse_icacls(std::string_view text);

/// Renders entries back in icacls layout (continuation lines aligned under
/// the first account).
std::string render_icacls(const std::vector<IcaclsFolder>& folders);

/// F 0x1f01ff, M 0x1301bf, RX 0x1200a9, R 0x120089, W 0x120116, D 0x10000.
/// Throws IcaclsError(UnknownToken).
AccessMask simple_right_mask(std::string_view token);

struct IcaclsImport {
    FolderNode root;
    /// Unresolved accounts and synthesized folders.
    std::vector<Defect> defects;
};

/// Resolves accounts against `directory` and assembles a folder tree.
/// Unresolvable accounts become UnresolvedAccount defects and their ACEs use
/// the NULL SID, which never matches a closure.
IcaclsImport import_icacls(const std::vector<IcaclsFolder>& folders, const Directory& directory);

}  // namespace aclaudit
