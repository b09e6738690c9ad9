#pragma once

#include <string>
#include <string_view>

#include "aclaudit/snapshot.hpp"

namespace aclaudit {

/// Reads a version-1 snapshot document:
///
///   {"version": 1, "domain": "...",
///    "principals": [{"sid", "name", "kind": "user"|"group", "members"?, "aliases"?}],
///    "folders": [{"path", "protected"?, "dacl_present"?,
///                 "sddl"? | "aces"?: [{"type", "sid", "mask": "0x...", "flags": [...]}]}]}
///
/// Validates the directory and every descriptor. Throws SchemaError,
/// ConflictingSecurityForm, SddlError or ValidationFailure.
Snapshot load_snapshot(std::string_view bytes);

/// Only the "domain" and "principals" parts of a snapshot document.
Directory load_directory(std::string_view bytes);

/// Deterministic JSON (sorted keys, folders in tree pre-order, 2-space
/// indent). Folders with an owner or group are written as SDDL, others in
/// structured form.
std::string save_snapshot(const Snapshot& snapshot);

Snapshot read_snapshot_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

}  // namespace aclaudit
