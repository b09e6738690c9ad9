#include "aclaudit/snapshot_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "aclaudit/sddl_codec.hpp"

namespace aclaudit {

namespace {

using json = nlohmann::json;

const json& member(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where, std::string("missing field \"") + key + "\"");
    return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_string()) throw SchemaError(where + "/" + key, "expected a string");
    return v.get<std::string>();
}

bool bool_field(const json& obj, const char* key, bool fallback, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean()) throw SchemaError(where + "/" + key, "expected a boolean");
    return it->get<bool>();
}

const json& array_field(const json& obj, const char* key, const std::string& where) {
    const json& v = member(obj, key, where);
    if (!v.is_array()) throw SchemaError(where + "/" + key, "expected an array");
    return v;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw SchemaError(where + "/" + key, "unexpected field");
    }
}

Sid sid_value(const json& v, const std::string& where, std::vector<Defect>* defects) {
    if (!v.is_string()) throw SchemaError(where, "expected a SID string");
    const auto text = v.get<std::string>();
    if (auto sid = Sid::parse(text)) return *sid;
    if (defects) {
        defects->push_back({Defect::Kind::MalformedSid, where, text});
        return well_known::kNull;
    }
    throw SchemaError(where, "malformed SID \"" + text + "\"");
}

json parse_json(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
}

Directory directory_from(const json& doc, std::vector<Defect>& defects) {
    if (!doc.is_object()) throw SchemaError("", "expected an object");
    const std::string domain = string_field(doc, "domain", "");
    const json& list = array_field(doc, "principals", "");
    std::vector<Principal> principals;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "/principals/" + std::to_string(i);
        const json& p = list[i];
        if (!p.is_object()) throw SchemaError(where, "expected an object");
        check_keys(p, {"sid", "name", "kind", "members", "aliases"}, where);
        Principal principal{sid_value(member(p, "sid", where), where + "/sid", &defects),
                            string_field(p, "name", where), PrincipalKind::User, {}, {}};
        const std::string kind = string_field(p, "kind", where);
        if (kind == "group") {
            principal.kind = PrincipalKind::Group;
        } else if (kind != "user") {
            throw SchemaError(where + "/kind", "expected \"user\" or \"group\"");
        }
        if (p.contains("members")) {
            const json& members = array_field(p, "members", where);
            for (std::size_t m = 0; m < members.size(); ++m) {
                principal.members.push_back(
                    sid_value(members[m], where + "/members/" + std::to_string(m), &defects));
            }
        }
        if (p.contains("aliases")) {
            for (const auto& a : array_field(p, "aliases", where)) {
                if (!a.is_string()) throw SchemaError(where + "/aliases", "expected strings");
                principal.aliases.push_back(a.get<std::string>());
            }
        }
        principals.push_back(std::move(principal));
    }
    return Directory(domain, std::move(principals));
}

Ace ace_from(const json& a, const std::string& where) {
    if (!a.is_object()) throw SchemaError(where, "expected an object");
    check_keys(a, {"type", "sid", "mask", "flags"}, where);
    Ace ace;
    const std::string type = string_field(a, "type", where);
    if (type == "deny") {
        ace.type = AceType::Deny;
    } else if (type != "allow") {
        throw SchemaError(where + "/type", "expected \"allow\" or \"deny\"");
    }
    ace.sid = sid_value(member(a, "sid", where), where + "/sid", nullptr);
    const std::string mask = string_field(a, "mask", where);
    const auto parsed = parse_hex_mask(mask);
    if (!parsed) throw SchemaError(where + "/mask", "expected \"0x\" followed by hex digits");
    ace.mask = *parsed;
    if (a.contains("flags")) {
        for (const auto& f : array_field(a, "flags", where)) {
            const std::string name = f.is_string() ? f.get<std::string>() : "";
            AceFlag flag;
            if (name == "OI") flag = AceFlag::ObjectInherit;
            else if (name == "CI") flag = AceFlag::ContainerInherit;
            else if (name == "NP") flag = AceFlag::NoPropagate;
            else if (name == "IO") flag = AceFlag::InheritOnly;
            else if (name == "ID") flag = AceFlag::Inherited;
            else throw SchemaError(where + "/flags", "expected one of OI, CI, NP, IO, ID");
            if (ace.flags.has(flag)) throw SchemaError(where + "/flags", "duplicate flag " + name);
            ace.flags.set(flag);
        }
    }
    return ace;
}

FolderNode folder_from(const json& f, const std::string& where, std::vector<std::string>& warnings) {
    if (!f.is_object()) throw SchemaError(where, "expected an object");
    check_keys(f, {"path", "protected", "dacl_present", "sddl", "aces"}, where);
    FolderNode node;
    node.path = normalize_path(string_field(f, "path", where));
    if (f.contains("sddl")) {
        if (f.contains("aces") || f.contains("protected") || f.contains("dacl_present")) {
            throw ConflictingSecurityForm(where);
        }
        const auto text = string_field(f, "sddl", where);
        node.sd = parse_sddl(text, &warnings);
        return node;
    }
    node.sd.is_protected = bool_field(f, "protected", false, where);
    node.sd.dacl.present = bool_field(f, "dacl_present", true, where);
    if (f.contains("aces")) {
        if (!node.sd.dacl.present) throw ConflictingSecurityForm(where);
        const json& aces = array_field(f, "aces", where);
        for (std::size_t i = 0; i < aces.size(); ++i) {
            node.sd.dacl.aces.push_back(ace_from(aces[i], where + "/aces/" + std::to_string(i)));
        }
    }
    node.sd.normalize();
    return node;
}

json flags_json(AceFlags flags) {
    json out = json::array();
    if (flags.has(AceFlag::ObjectInherit)) out.push_back("OI");
    if (flags.has(AceFlag::ContainerInherit)) out.push_back("CI");
    if (flags.has(AceFlag::NoPropagate)) out.push_back("NP");
    if (flags.has(AceFlag::InheritOnly)) out.push_back("IO");
    if (flags.has(AceFlag::Inherited)) out.push_back("ID");
    return out;
}

json folder_json(const FolderNode& node) {
    json f = json::object();
    f["path"] = node.path;
    const auto& sd = node.sd;
    if (sd.owner || sd.group) {
        if (sd.dacl.present) {
            f["sddl"] = emit_sddl(sd);
            return f;
        }
        // TODO: owner/group of a null-DACL folder has no home in the schema yet.
    }
    if (!sd.dacl.present) {
        f["dacl_present"] = false;
        return f;
    }
    if (sd.is_protected) f["protected"] = true;
    json aces = json::array();
    for (const auto& ace : sd.dacl.aces) {
        aces.push_back({{"type", ace.is_deny() ? "deny" : "allow"},
                        {"sid", ace.sid.str()},
                        {"mask", to_hex(ace.mask)},
                        {"flags", flags_json(ace.flags)}});
    }
    f["aces"] = std::move(aces);
    return f;
}

}  // namespace

Directory load_directory(std::string_view bytes) {
    const json doc = parse_json(bytes);
    std::vector<Defect> defects;
    Directory directory = directory_from(doc, defects);
    for (auto& d : validate_directory(directory)) defects.push_back(std::move(d));
    if (!defects.empty()) throw ValidationFailure(std::move(defects));
    return directory;
}

Snapshot load_snapshot(std::string_view bytes) {
    const json doc = parse_json(bytes);
    if (!doc.is_object()) throw SchemaError("", "expected an object");
    check_keys(doc, {"version", "domain", "principals", "folders"}, "");
    const json& version = member(doc, "version", "");
    if (!version.is_number_integer() || version.get<int>() != 1) throw SchemaError("/version", "expected 1");

    std::vector<Defect> defects;
    Snapshot snapshot;
    snapshot.directory = directory_from(doc, defects);

    const json& folders = array_field(doc, "folders", "");
    std::vector<FolderNode> flat;
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < folders.size(); ++i) {
        flat.push_back(folder_from(folders[i], "/folders/" + std::to_string(i), warnings));
    }
    snapshot.root = build_folder_tree(std::move(flat));

    for (auto& d : validate_directory(snapshot.directory)) defects.push_back(std::move(d));
    for_each_folder(snapshot.root, [&](const FolderNode& node) {
        for (auto d : validate_sd(node.sd, snapshot.directory)) {
            d.subject = node.path + " " + d.subject;
            defects.push_back(std::move(d));
        }
    });
    if (!defects.empty()) throw ValidationFailure(std::move(defects));
    return snapshot;
}

std::string save_snapshot(const Snapshot& snapshot) {
    json doc = json::object();
    doc["version"] = snapshot.version;
    doc["domain"] = snapshot.domain();
    json principals = json::array();
    for (const auto& p : snapshot.directory.principals()) {
        json entry = {{"sid", p.sid.str()}, {"name", p.name}, {"kind", p.kind == PrincipalKind::User ? "user" : "group"}};
        if (p.kind == PrincipalKind::Group || !p.members.empty()) {
            json members = json::array();
            for (const auto& m : p.members) members.push_back(m.str());
            entry["members"] = std::move(members);
        }
        if (!p.aliases.empty()) entry["aliases"] = p.aliases;
        principals.push_back(std::move(entry));
    }
    doc["principals"] = std::move(principals);
    json folders = json::array();
    for_each_folder(snapshot.root, [&](const FolderNode& node) { folders.push_back(folder_json(node)); });
    doc["folders"] = std::move(folders);
    return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + path);
}

Snapshot read_snapshot_file(const std::string& path) { return load_snapshot(read_text_file(path)); }

}  // namespace aclaudit
