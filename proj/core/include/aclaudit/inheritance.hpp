#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "aclaudit/ace_model.hpp"

namespace aclaudit {

/// A folder and its security descriptor. Children are kept sorted by
/// case-insensitive name.
struct FolderNode {
    std::string path;  // forward slashes, no trailing slash
    SecurityDescriptor sd;
    std::vector<FolderNode> children;

    std::string_view name() const noexcept;
    bool operator==(const FolderNode&) const = default;
};

/// Backslashes become forward slashes; trailing slashes are dropped.
std::string normalize_path(std::string_view path);
/// Empty when `path` has no separator.
std::string parent_path(std::string_view path);

const FolderNode* find_folder(const FolderNode& root, std::string_view path);

/// Assembles a rooted tree from folders given in any order; parentage comes
/// from the paths. With `synthesize_missing`, absent ancestors up to the
/// deepest common ancestor are created with an empty DACL and their paths
/// appended to `synthesized`. Throws SchemaError on duplicates, orphans or
/// several roots.
FolderNode build_folder_tree(std::vector<FolderNode> folders, bool synthesize_missing = false,
                             std::vector<std::string>* synthesized = nullptr);

/// Pre-order visit.
template <typename Fn>
void for_each_folder(const FolderNode& node, Fn&& fn) {
    fn(node);
    for (const auto& child : node.children) for_each_folder(child, fn);
}

/// True when the stored list carries ID-flagged entries, i.e. it already
/// lists the inherited ACEs (as an icacls dump does).
bool is_materialized(const Dacl& dacl) noexcept;

struct EffectiveAce {
    Ace ace;
    std::string source;      // folder the ACE was written on
    std::size_t depth = 0;   // depth of that folder, root = 0

    bool operator==(const EffectiveAce&) const = default;
};

/// The ACE list an access check walks for one folder.
struct EffectiveDacl {
    bool present = true;
    std::vector<EffectiveAce> aces;

    bool operator==(const EffectiveDacl&) const = default;
};

/// Effective DACL of a folder with no ancestors.
EffectiveDacl root_effective_dacl(const SecurityDescriptor& sd, std::string_view path);

/// Child effective DACL: its own canonical explicit ACEs, then the parent's
/// propagating ACEs, nearest source first.
EffectiveDacl propagate_step(const EffectiveDacl& parent, const SecurityDescriptor& child_sd,
                             std::string_view child_path, std::size_t child_depth);

/// Folds propagate_step from the root down to `path`. Throws UnknownPath.
EffectiveDacl effective_dacl(const FolderNode& root, std::string_view path);

/// Flat, indexable view of a folder tree. Does not own the nodes.
class FolderIndex {
public:
    explicit FolderIndex(const FolderNode& root);

    std::size_t size() const noexcept { return nodes_.size(); }
    const FolderNode& node(std::size_t i) const { return *nodes_[i]; }
    std::optional<std::size_t> parent(std::size_t i) const { return parents_[i]; }
    std::size_t depth(std::size_t i) const { return depths_[i]; }
    std::optional<std::size_t> find(std::string_view path) const;
    /// Throws UnknownPath.
    std::size_t at(std::string_view path) const;

    std::vector<std::size_t> children(std::size_t i) const;
    /// All descendants in pre-order, excluding `i`.
    std::vector<std::size_t> descendants(std::size_t i) const;

private:
    std::vector<const FolderNode*> nodes_;  // pre-order
    std::vector<std::optional<std::size_t>> parents_;
    std::vector<std::size_t> depths_;
    std::vector<std::size_t> subtree_end_;
    std::unordered_map<std::string, std::size_t> by_path_;  // lowercased
};

}  // namespace aclaudit
