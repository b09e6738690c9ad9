#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "aclaudit/ace_model.hpp"

namespace aclaudit {

/// Parses the SDDL subset
///
///   ["O:" sid] ["G:" sid] "D:" ["P"] ace* ["S:" ...]
///   ace    = "(" ("A"|"D") ";" flags ";" rights ";;;" sid ")"
///   flags  = { "OI" | "CI" | "NP" | "IO" | "ID" }
///   rights = "0x" hex | { "FA" | "FR" | "FW" | "FX" | "GA" | "GR" | "GW" | "GX" }
///   sid    = "S-1-..." | "WD" | "BA" | "SY" | "AU"
///
/// The SACL section is skipped; a note is appended to `warnings` when given.
/// Throws SddlError with a 1-based offset.
SecurityDescriptor parse_sddl(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Canonical text: owner/group only when set, flags in OI CI NP IO ID order,
/// rights as FA/FR/FW/FX when the mask equals the alias, else lowercase hex.
/// Throws SddlError(NullDaclUnrepresentable) for a null DACL.
std::string emit_sddl(const SecurityDescriptor& sd);

}  // namespace aclaudit
