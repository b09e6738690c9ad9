#include "aclaudit/icacls_import.hpp"

#include <array>
#include <cctype>

#include "aclaudit/inheritance.hpp"

namespace aclaudit {

namespace {

using Kind = IcaclsError::Kind;

constexpr std::array<std::pair<std::string_view, AccessMask>, 6> kSimpleRights = {{
    {"F", rights::kFullControl},
    {"M", AccessMask(0x1301BF)},
    {"RX", AccessMask(0x1200A9)},
    {"R", rights::kFileGenericRead},
    {"W", rights::kFileGenericWrite},
    {"D", rights::kDelete},
}};

// Flag tokens in rendering order.
constexpr std::array<std::pair<std::string_view, AceFlag>, 5> kFlagTokens = {{
    {"I", AceFlag::Inherited},
    {"OI", AceFlag::ObjectInherit},
    {"CI", AceFlag::ContainerInherit},
    {"NP", AceFlag::NoPropagate},
    {"IO", AceFlag::InheritOnly},
}};

bool is_summary(std::string_view line) {
    return line.starts_with("Successfully processed") || line.starts_with("Failed processing");
}

bool is_blank(std::string_view line) {
    for (const char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::size_t leading_spaces(std::string_view line) {
    std::size_t n = 0;
    while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
    return n;
}

// Parses "account:(tok)(tok)..." where `entry` starts at 0-based `offset`
// within line `line_no`.
IcaclsEntry parse_entry(std::string_view entry, std::size_t line_no, std::size_t offset) {
    const auto colon = entry.find(":(");
    if (colon == std::string_view::npos || colon == 0) {
        throw IcaclsError(Kind::MalformedEntry, line_no, offset + 1, "expected \"account:(...)\"");
    }
    IcaclsEntry out;
    out.account = std::string(entry.substr(0, colon));
    std::size_t pos = colon + 1;
    while (pos < entry.size()) {
        if (entry[pos] != '(') {
            if (is_blank(entry.substr(pos))) break;
            throw IcaclsError(Kind::MalformedEntry, line_no, offset + pos + 1, "expected '('");
        }
        const auto close = entry.find(')', pos);
        if (close == std::string_view::npos) {
            throw IcaclsError(Kind::MalformedEntry, line_no, offset + pos + 1, "unterminated '('");
        }
        const auto token = entry.substr(pos + 1, close - pos - 1);
        const std::size_t column = offset + pos + 2;
        bool known = false;
        for (const auto& [name, flag] : kFlagTokens) {
            if (name != token) continue;
            if (out.flags.has(flag)) throw IcaclsError(Kind::MalformedEntry, line_no, column, "duplicate flag");
            out.flags.set(flag);
            known = true;
        }
        if (token == "DENY") {
            if (out.deny) throw IcaclsError(Kind::MalformedEntry, line_no, column, "duplicate DENY");
            out.deny = true;
            known = true;
        }
        for (const auto& [name, mask] : kSimpleRights) {
            if (name != token) continue;
            if (!out.right_token.empty()) {
                throw IcaclsError(Kind::MalformedEntry, line_no, column, "more than one rights token");
            }
            out.right_token = std::string(token);
            known = true;
        }
        if (!known) {
            throw IcaclsError(Kind::UnknownToken, line_no, column, "unknown token \"" + std::string(token) + "\"");
        }
        pos = close + 1;
    }
    if (out.right_token.empty()) {
        throw IcaclsError(Kind::MalformedEntry, line_no, offset + entry.size() + 1, "entry has no rights token");
    }
    return out;
}

}  // namespace

AccessMask simple_right_mask(std::string_view token) {
    for (const auto& [name, mask] : kSimpleRights) {
        if (name == token) return mask;
    }
    throw IcaclsError(Kind::UnknownToken, 0, 0, "unknown rights token \"" + std::string(token) + "\"");
}

std::vector<IcaclsFolder> parse_icacls(std::string_view text) {
    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start <= text.size();) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }

    std::vector<IcaclsFolder> folders;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        const std::size_t line_no = i + 1;
        if (is_blank(line) || is_summary(line)) continue;

        const std::size_t indent = leading_spaces(line);
        if (indent > 0) {
            if (folders.empty()) {
                throw IcaclsError(Kind::MalformedEntry, line_no, indent + 1, "entry before any path line");
            }
            folders.back().entries.push_back(parse_entry(line.substr(indent), line_no, indent));
            continue;
        }

        const auto colon = line.find(":(");
        if (colon == std::string_view::npos) {
            throw IcaclsError(Kind::MalformedEntry, line_no, 1, "expected \"<path> <account>:(...)\"");
        }
        // Real icacls output aligns continuation lines under the first
        // account, which pins the split even when the path has spaces.
        std::size_t split = std::string_view::npos;
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            if (is_blank(lines[j])) continue;
            const std::size_t k = leading_spaces(lines[j]);
            if (k > 1 && k < colon && line[k - 1] == ' ') split = k - 1;
            break;
        }
        if (split == std::string_view::npos) {
            split = line.find_first_of(" \t");
            if (split == std::string_view::npos || split > colon) {
                throw IcaclsError(Kind::MalformedEntry, line_no, 1, "missing whitespace between path and account");
            }
        }
        std::size_t account_start = split;
        while (account_start < line.size() && (line[account_start] == ' ' || line[account_start] == '\t')) {
            ++account_start;
        }
        IcaclsFolder folder;
        folder.path = std::string(line.substr(0, split));
        folder.entries.push_back(parse_entry(line.substr(account_start), line_no, account_start));
        folders.push_back(std::move(folder));
    }
    return folders;
}

std::string render_icacls(const std::vector<IcaclsFolder>& folders) {
    auto render_entry = [](const IcaclsEntry& e) {
        std::string s = e.account + ":";
        for (const auto& [name, flag] : kFlagTokens) {
            if (e.flags.has(flag)) s += "(" + std::string(name) + ")";
        }
        if (e.deny) s += "(DENY)";
        s += "(" + e.right_token + ")";
        return s;
    };
    std::string out;
    for (const auto& folder : folders) {
        const std::string pad(folder.path.size() + 1, ' ');
        for (std::size_t i = 0; i < folder.entries.size(); ++i) {
            out += i == 0 ? folder.path + " " : pad;
            out += render_entry(folder.entries[i]);
            out += "\r\n";
        }
        out += "\r\n";
    }
    return out;
}

IcaclsImport import_icacls(const std::vector<IcaclsFolder>& folders, const Directory& directory) {
    IcaclsImport result;
    std::vector<FolderNode> flat;
    for (const auto& folder : folders) {
        FolderNode node{normalize_path(folder.path), SecurityDescriptor{}, {}};
        for (const auto& entry : folder.entries) {
            Ace ace;
            ace.type = entry.deny ? AceType::Deny : AceType::Allow;
            ace.mask = simple_right_mask(entry.right_token);
            ace.flags = entry.flags;
            try {
                ace.sid = resolve_principal(directory, entry.account).sid;
            } catch (const Error& e) {
                ace.sid = well_known::kNull;
                result.defects.push_back({Defect::Kind::UnresolvedAccount, node.path + " " + entry.account, e.what()});
            }
            node.sd.dacl.aces.push_back(std::move(ace));
        }
        flat.push_back(std::move(node));
    }
    std::vector<std::string> synthesized;
    result.root = build_folder_tree(std::move(flat), true, &synthesized);
    for (const auto& path : synthesized) {
        result.defects.push_back({Defect::Kind::SynthesizedFolder, path, "not in the listing; given an empty DACL"});
    }
    return result;
}

}  // namespace aclaudit
