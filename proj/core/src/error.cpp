#include "aclaudit/error.hpp"

namespace aclaudit {

const char* to_string(Defect::Kind kind) noexcept {
    switch (kind) {
        case Defect::Kind::MalformedSid: return "MalformedSid";
        case Defect::Kind::DanglingMember: return "DanglingMember";
        case Defect::Kind::DuplicateName: return "DuplicateName";
        case Defect::Kind::DuplicateSid: return "DuplicateSid";
        case Defect::Kind::UserHasMembers: return "UserHasMembers";
        case Defect::Kind::ReservedSid: return "ReservedSid";
        case Defect::Kind::ZeroMask: return "ZeroMask";
        case Defect::Kind::UnknownSid: return "UnknownSid";
        case Defect::Kind::OrphanInheritOnly: return "OrphanInheritOnly";
        case Defect::Kind::UndefinedBits: return "UndefinedBits";
        case Defect::Kind::UnresolvedAccount: return "UnresolvedAccount";
        case Defect::Kind::SynthesizedFolder: return "SynthesizedFolder";
    }
    return "?";
}

namespace {

std::string summarize(const std::vector<Defect>& defects) {
    std::string text = "validation failed with " + std::to_string(defects.size()) + " defect(s)";
    for (const auto& d : defects) {
        text += "\n  ";
        text += to_string(d.kind);
        text += " ";
        text += d.subject;
        if (!d.detail.empty()) text += ": " + d.detail;
    }
    return text;
}

}  // namespace

ValidationFailure::ValidationFailure(std::vector<Defect> defects)
    : Error(summarize(defects)), defects_(std::move(defects)) {}

}  // namespace aclaudit
