#pragma once

#include <string>

#include "aclaudit/inheritance.hpp"
#include "aclaudit/principals.hpp"

namespace aclaudit {

/// A folder tree plus the directory its ACEs refer to. Immutable once loaded.
struct Snapshot {
    int version = 1;
    Directory directory;
    FolderNode root;

    const std::string& domain() const noexcept { return directory.domain(); }
    bool operator==(const Snapshot&) const = default;
};

}  // namespace aclaudit
