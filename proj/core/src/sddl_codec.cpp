#include "aclaudit/sddl_codec.hpp"

#include <array>
#include <cctype>

namespace aclaudit {

namespace {

using Kind = SddlError::Kind;

struct SidAlias {
    std::string_view token;
    const Sid* sid;
};

const std::array<SidAlias, 4>& sid_aliases() {
    static const std::array<SidAlias, 4> table = {{
        {"WD", &well_known::kEveryone},
        {"BA", &well_known::kAdministrators},
        {"SY", &well_known::kLocalSystem},
        {"AU", &well_known::kAuthenticatedUsers},
    }};
    return table;
}

struct RightAlias {
    std::string_view token;
    AccessMask mask;
};

// Emission prefers the first four.
constexpr std::array<RightAlias, 8> kRightAliases = {{
    {"FA", rights::kFullControl},
    {"FR", rights::kFileGenericRead},
    {"FW", rights::kFileGenericWrite},
    {"FX", rights::kFileGenericExecute},
    {"GA", rights::kFullControl},
    {"GR", rights::kFileGenericRead},
    {"GW", rights::kFileGenericWrite},
    {"GX", rights::kFileGenericExecute},
}};

constexpr std::array<std::pair<std::string_view, AceFlag>, 5> kFlagTokens = {{
    {"OI", AceFlag::ObjectInherit},
    {"CI", AceFlag::ContainerInherit},
    {"NP", AceFlag::NoPropagate},
    {"IO", AceFlag::InheritOnly},
    {"ID", AceFlag::Inherited},
}};

class Parser {
public:
    Parser(std::string_view text, std::vector<std::string>* warnings) : text_(text), warnings_(warnings) {}

    SecurityDescriptor run() {
        SecurityDescriptor sd;
        if (lookahead("O:")) {
            pos_ += 2;
            sd.owner = sid_token();
        }
        if (lookahead("G:")) {
            pos_ += 2;
            sd.group = sid_token();
        }
        if (!lookahead("D:")) fail(Kind::Syntax, "expected one of {\"O:\", \"G:\", \"D:\"}");
        pos_ += 2;
        if (peek() == 'P') {
            sd.is_protected = true;
            ++pos_;
        }
        while (peek() == '(') sd.dacl.aces.push_back(ace());
        if (lookahead("S:")) {
            skip_sacl();
        }
        if (pos_ != text_.size()) fail(Kind::Syntax, "expected one of {\"(\", \"S:\", end of input}");
        return sd;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool lookahead(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    [[noreturn]] void fail(Kind kind, const std::string& message) const { throw SddlError(kind, pos_ + 1, message); }

    void expect(char c) {
        if (peek() != c || pos_ >= text_.size()) fail(Kind::Syntax, std::string("expected '") + c + "'");
        ++pos_;
    }

    // Two uppercase letters, or fail with `what`.
    std::string_view pair_token(const char* what) {
        if (pos_ + 2 > text_.size() || !std::isupper(static_cast<unsigned char>(text_[pos_])) ||
            !std::isupper(static_cast<unsigned char>(text_[pos_ + 1]))) {
            fail(Kind::Syntax, what);
        }
        return text_.substr(pos_, 2);
    }

    Sid sid_token() {
        if (lookahead("S-1-")) {
            std::size_t end = pos_ + 1;
            while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '-')) {
                ++end;
            }
            auto sid = Sid::parse(text_.substr(pos_, end - pos_));
            if (!sid) fail(Kind::Syntax, "malformed SID");
            pos_ = end;
            return *std::move(sid);
        }
        const auto tok = pair_token("expected a SID or one of {WD, BA, SY, AU}");
        for (const auto& alias : sid_aliases()) {
            if (alias.token == tok) {
                pos_ += 2;
                return *alias.sid;
            }
        }
        fail(Kind::UnknownSidAlias, "unknown SID alias \"" + std::string(tok) + "\"");
    }

    Ace ace() {
        expect('(');
        Ace out;
        switch (peek()) {
            case 'A': out.type = AceType::Allow; break;
            case 'D': out.type = AceType::Deny; break;
            default: fail(Kind::Syntax, "expected ACE type one of {A, D}");
        }
        ++pos_;
        expect(';');
        while (peek() != ';') {
            const auto tok = pair_token("expected ACE flag one of {OI, CI, NP, IO, ID} or ';'");
            bool found = false;
            for (const auto& [name, flag] : kFlagTokens) {
                if (name != tok) continue;
                if (out.flags.has(flag)) fail(Kind::Syntax, "duplicate ACE flag \"" + std::string(tok) + "\"");
                out.flags.set(flag);
                found = true;
            }
            if (!found) fail(Kind::Syntax, "unknown ACE flag \"" + std::string(tok) + "\"");
            pos_ += 2;
        }
        expect(';');
        out.mask = rights_field();
        expect(';');
        if (peek() != ';') fail(Kind::Syntax, "object GUID fields must be empty");
        expect(';');
        if (peek() != ';') fail(Kind::Syntax, "object GUID fields must be empty");
        expect(';');
        out.sid = sid_token();
        expect(')');
        return out;
    }

    AccessMask rights_field() {
        if (lookahead("0x") || lookahead("0X")) {
            std::size_t end = pos_ + 2;
            while (end < text_.size() && std::isxdigit(static_cast<unsigned char>(text_[end]))) ++end;
            const auto mask = parse_hex_mask(text_.substr(pos_, end - pos_));
            if (!mask) fail(Kind::Syntax, "expected 1-8 hex digits after \"0x\"");
            pos_ = end;
            return *mask;
        }
        if (peek() == ';') fail(Kind::Syntax, "expected rights: hex mask or one of {FA, FR, FW, FX, GA, GR, GW, GX}");
        AccessMask mask;
        while (peek() != ';') {
            if (pos_ + 2 > text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_])) ||
                !std::isalpha(static_cast<unsigned char>(text_[pos_ + 1]))) {
                fail(Kind::UndefinedRightToken, "expected rights token one of {FA, FR, FW, FX, GA, GR, GW, GX}");
            }
            const auto tok = text_.substr(pos_, 2);
            bool found = false;
            for (const auto& alias : kRightAliases) {
                if (alias.token == tok) {
                    mask |= alias.mask;
                    found = true;
                    break;
                }
            }
            if (!found) fail(Kind::UndefinedRightToken, "undefined rights token \"" + std::string(tok) + "\"");
            pos_ += 2;
        }
        return mask;
    }

    void skip_sacl() {
        const std::size_t start = pos_;
        pos_ += 2;
        int depth = 0;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '(') ++depth;
            if (c == ')' && --depth < 0) fail(Kind::Syntax, "unbalanced ')' in SACL");
            ++pos_;
        }
        if (depth != 0) fail(Kind::Syntax, "unterminated ACE in SACL");
        if (warnings_) warnings_->push_back("SACL at offset " + std::to_string(start + 1) + " ignored");
    }

    std::string_view text_;
    std::vector<std::string>* warnings_;
    std::size_t pos_ = 0;
};

std::string sid_text(const Sid& sid) {
    for (const auto& alias : sid_aliases()) {
        if (*alias.sid == sid) return std::string(alias.token);
    }
    return sid.str();
}

}  // namespace

SecurityDescriptor parse_sddl(std::string_view text, std::vector<std::string>* warnings) {
    return Parser(text, warnings).run();
}

std::string emit_sddl(const SecurityDescriptor& sd) {
    if (!sd.dacl.present) {
        throw SddlError(Kind::NullDaclUnrepresentable, 0, "a null DACL has no \"D:\" form; use dacl_present=false");
    }
    std::string out;
    if (sd.owner) out += "O:" + sid_text(*sd.owner);
    if (sd.group) out += "G:" + sid_text(*sd.group);
    out += "D:";
    if (sd.is_protected) out += 'P';
    for (const Ace& ace : sd.dacl.aces) {
        out += '(';
        out += ace.is_deny() ? 'D' : 'A';
        out += ';';
        for (const auto& [name, flag] : kFlagTokens) {
            if (ace.flags.has(flag)) out += name;
        }
        out += ';';
        std::string rights = to_hex(ace.mask);
        for (std::size_t i = 0; i < 4; ++i) {
            if (kRightAliases[i].mask == ace.mask) {
                rights = kRightAliases[i].token;
                break;
            }
        }
        out += rights;
        out += ";;;";
        out += sid_text(ace.sid);
        out += ')';
    }
    return out;
}

}  // namespace aclaudit
