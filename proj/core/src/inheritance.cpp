#include "aclaudit/inheritance.hpp"

#include <algorithm>
#include <functional>

namespace aclaudit {

std::string_view FolderNode::name() const noexcept {
    const std::string_view p = path;
    const auto slash = p.rfind('/');
    return slash == std::string_view::npos ? p : p.substr(slash + 1);
}

std::string normalize_path(std::string_view path) {
    std::string out(path);
    std::replace(out.begin(), out.end(), '\\', '/');
    while (out.size() > 1 && out.back() == '/') out.pop_back();
    return out;
}

std::string parent_path(std::string_view path) {
    const auto slash = path.rfind('/');
    return slash == std::string_view::npos ? std::string() : std::string(path.substr(0, slash));
}

const FolderNode* find_folder(const FolderNode& root, std::string_view path) {
    const std::string wanted = normalize_path(path);
    const FolderNode* node = &root;
    if (iequals(node->path, wanted)) return node;
    if (wanted.size() <= node->path.size() || !iequals(std::string_view(wanted).substr(0, node->path.size()), node->path))
        return nullptr;
    while (node) {
        const FolderNode* next = nullptr;
        for (const auto& child : node->children) {
            const std::string_view cp = child.path;
            if (iequals(cp, wanted)) return &child;
            if (wanted.size() > cp.size() && wanted[cp.size()] == '/' &&
                iequals(std::string_view(wanted).substr(0, cp.size()), cp)) {
                next = &child;
                break;
            }
        }
        node = next;
    }
    return nullptr;
}

FolderNode build_folder_tree(std::vector<FolderNode> folders, bool synthesize_missing,
                             std::vector<std::string>* synthesized) {
    if (folders.empty()) throw SchemaError("/folders", "at least one folder is required");
    std::unordered_map<std::string, std::size_t> by_path;
    for (std::size_t i = 0; i < folders.size(); ++i) {
        folders[i].path = normalize_path(folders[i].path);
        folders[i].children.clear();
        if (folders[i].path.empty()) throw SchemaError("/folders/" + std::to_string(i), "empty path");
        if (!by_path.emplace(to_lower(folders[i].path), i).second) {
            throw SchemaError("/folders/" + std::to_string(i), "duplicate folder path " + folders[i].path);
        }
    }

    if (synthesize_missing) {
        // Deepest common ancestor-or-self of every path.
        std::string common = folders.front().path;
        for (const auto& f : folders) {
            while (!common.empty()) {
                const std::string_view p = f.path;
                if (p.size() >= common.size() && iequals(p.substr(0, common.size()), common) &&
                    (p.size() == common.size() || p[common.size()] == '/'))
                    break;
                common = parent_path(common);
            }
        }
        if (common.empty()) throw SchemaError("/folders", "folders do not share a common root");
        const std::size_t original = folders.size();
        for (std::size_t i = 0; i < original; ++i) {
            std::string p = folders[i].path;
            while (p.size() > common.size()) {
                p = parent_path(p);
                if (by_path.contains(to_lower(p))) continue;
                by_path.emplace(to_lower(p), folders.size());
                folders.push_back(FolderNode{p, SecurityDescriptor{}, {}});
                if (synthesized) synthesized->push_back(p);
            }
        }
    }

    std::vector<std::vector<std::size_t>> kids(folders.size());
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < folders.size(); ++i) {
        const std::string parent = parent_path(folders[i].path);
        const auto it = parent.empty() ? by_path.end() : by_path.find(to_lower(parent));
        if (it != by_path.end()) {
            kids[it->second].push_back(i);
        } else if (root) {
            throw SchemaError("/folders/" + std::to_string(i),
                              "folder " + folders[i].path + " is not under " + folders[*root].path);
        } else {
            root = i;
        }
    }

    std::function<FolderNode(std::size_t)> assemble = [&](std::size_t i) {
        FolderNode node = std::move(folders[i]);
        auto& list = kids[i];
        std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
            const auto la = to_lower(folders[a].path);
            const auto lb = to_lower(folders[b].path);
            return la != lb ? la < lb : folders[a].path < folders[b].path;
        });
        for (const std::size_t c : list) node.children.push_back(assemble(c));
        return node;
    };
    return assemble(*root);
}

bool is_materialized(const Dacl& dacl) noexcept {
    return std::any_of(dacl.aces.begin(), dacl.aces.end(), [](const Ace& a) { return a.is_inherited(); });
}

namespace {

// The folder's own stored ACEs in evaluation order. Explicit entries are
// canonicalized; ID-flagged entries keep their stored order after them.
std::vector<EffectiveAce> own_aces(const Dacl& dacl, std::string_view path, std::size_t depth) {
    std::vector<EffectiveAce> out;
    out.reserve(dacl.aces.size());
    for (const auto& ace : canonicalize(dacl).aces) out.push_back({ace, std::string(path), depth});
    // canonicalize() already places inherited blocks after explicit ones;
    // restore stored order among the ID entries.
    const auto first_inherited = std::find_if(out.begin(), out.end(), [](const EffectiveAce& e) {
        return e.ace.is_inherited();
    });
    std::size_t k = static_cast<std::size_t>(first_inherited - out.begin());
    for (const auto& ace : dacl.aces) {
        if (ace.is_inherited()) out[k++].ace = ace;
    }
    return out;
}

// Copy of a parent ACE as it lands on a child folder, if it lands at all.
std::optional<Ace> inherit_to_folder(const Ace& parent) {
    const bool oi = parent.flags.has(AceFlag::ObjectInherit);
    const bool ci = parent.flags.has(AceFlag::ContainerInherit);
    const bool np = parent.flags.has(AceFlag::NoPropagate);
    if (!oi && !ci) return std::nullopt;
    Ace child = parent;
    child.flags.set(AceFlag::Inherited);
    if (ci) {
        if (np) {
            child.flags.clear(AceFlag::ObjectInherit)
                .clear(AceFlag::ContainerInherit)
                .clear(AceFlag::InheritOnly)
                .clear(AceFlag::NoPropagate);
        } else {
            child.flags.clear(AceFlag::InheritOnly);
        }
        return child;
    }
    // Object-inherit only: meant for files. With NP it stops at the files of
    // this folder and never reaches a subfolder.
    if (np) return std::nullopt;
    child.flags.set(AceFlag::InheritOnly);
    return child;
}

}  // namespace

EffectiveDacl root_effective_dacl(const SecurityDescriptor& sd, std::string_view path) {
    if (!sd.dacl.present) return EffectiveDacl{false, {}};
    return EffectiveDacl{true, own_aces(sd.dacl, path, 0)};
}

EffectiveDacl propagate_step(const EffectiveDacl& parent, const SecurityDescriptor& child_sd,
                             std::string_view child_path, std::size_t child_depth) {
    if (!child_sd.dacl.present) return EffectiveDacl{false, {}};
    EffectiveDacl out{true, own_aces(child_sd.dacl, child_path, child_depth)};
    if (child_sd.is_protected || is_materialized(child_sd.dacl) || !parent.present) return out;
    for (const auto& entry : parent.aces) {
        if (auto copy = inherit_to_folder(entry.ace)) out.aces.push_back({*std::move(copy), entry.source, entry.depth});
    }
    return out;
}

EffectiveDacl effective_dacl(const FolderNode& root, std::string_view path) {
    const std::string wanted = normalize_path(path);
    std::vector<const FolderNode*> chain;
    std::function<bool(const FolderNode&)> walk = [&](const FolderNode& node) {
        chain.push_back(&node);
        if (iequals(node.path, wanted)) return true;
        for (const auto& child : node.children) {
            const std::string_view cp = child.path;
            if (wanted.size() >= cp.size() && iequals(std::string_view(wanted).substr(0, cp.size()), cp) &&
                (wanted.size() == cp.size() || wanted[cp.size()] == '/')) {
                if (walk(child)) return true;
            }
        }
        chain.pop_back();
        return false;
    };
    if (!walk(root)) throw UnknownPath(std::string(path));

    EffectiveDacl current = root_effective_dacl(chain.front()->sd, chain.front()->path);
    for (std::size_t d = 1; d < chain.size(); ++d) current = propagate_step(current, chain[d]->sd, chain[d]->path, d);
    return current;
}

FolderIndex::FolderIndex(const FolderNode& root) {
    std::function<void(const FolderNode&, std::optional<std::size_t>, std::size_t)> visit =
        [&](const FolderNode& node, std::optional<std::size_t> parent, std::size_t depth) {
            const std::size_t self = nodes_.size();
            nodes_.push_back(&node);
            parents_.push_back(parent);
            depths_.push_back(depth);
            subtree_end_.push_back(0);
            by_path_.emplace(to_lower(node.path), self);
            for (const auto& child : node.children) visit(child, self, depth + 1);
            subtree_end_[self] = nodes_.size();
        };
    visit(root, std::nullopt, 0);
}

std::optional<std::size_t> FolderIndex::find(std::string_view path) const {
    const auto it = by_path_.find(to_lower(normalize_path(path)));
    if (it == by_path_.end()) return std::nullopt;
    return it->second;
}

std::size_t FolderIndex::at(std::string_view path) const {
    if (auto i = find(path)) return *i;
    throw UnknownPath(std::string(path));
}

std::vector<std::size_t> FolderIndex::children(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t c = i + 1; c < subtree_end_[i]; c = subtree_end_[c]) out.push_back(c);
    return out;
}

std::vector<std::size_t> FolderIndex::descendants(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t c = i + 1; c < subtree_end_[i]; ++c) out.push_back(c);
    return out;
}

}  // namespace aclaudit
