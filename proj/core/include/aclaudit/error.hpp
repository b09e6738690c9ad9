#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aclaudit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A principal key (SID or account name) matched nothing.
class UnknownPrincipal : public Error {
public:
    explicit UnknownPrincipal(std::string key)
        : Error("unknown principal: " + key), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A bare account name matched principals in more than one domain.
class AmbiguousName : public Error {
public:
    explicit AmbiguousName(const std::string& key) : Error("ambiguous account name: " + key) {}
};

class UnknownPath : public Error {
public:
    explicit UnknownPath(std::string path) : Error("unknown folder: " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NullDacl : public Error {
public:
    NullDacl() : Error("operation requires a present DACL") {}
};

class EmptyRequest : public Error {
public:
    EmptyRequest() : Error("access check requested an empty mask") {}
};

/// Any failure to read an input document (SDDL, icacls text, snapshot JSON).
class ParseError : public Error {
public:
    using Error::Error;
};

class SddlError : public ParseError {
public:
    enum class Kind { Syntax, UnknownSidAlias, UndefinedRightToken, NullDaclUnrepresentable };

    SddlError(Kind kind, std::size_t position, const std::string& message)
        : ParseError(position ? "sddl:" + std::to_string(position) + ": " + message : "sddl: " + message),
          kind_(kind),
          position_(position) {}

    Kind kind() const noexcept { return kind_; }
    /// 1-based character offset; 0 when the error is not tied to a position.
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

class IcaclsError : public ParseError {
public:
    enum class Kind { MalformedEntry, UnknownToken };

    IcaclsError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
        : ParseError("icacls:" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          kind_(kind),
          line_(line),
          column_(column) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

/// Snapshot document does not match the schema. `where` is a JSON pointer.
class SchemaError : public ParseError {
public:
    SchemaError(std::string where, const std::string& message)
        : ParseError("schema error at " + (where.empty() ? std::string("/") : where) + ": " + message),
          where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class ConflictingSecurityForm : public SchemaError {
public:
    explicit ConflictingSecurityForm(std::string where)
        : SchemaError(std::move(where), "folder mixes \"sddl\" with structured security fields") {}
};

/// A finding about a directory or security descriptor. Defects are data; the
/// loader turns them into ValidationFailure.
struct Defect {
    enum class Kind {
        MalformedSid,
        DanglingMember,
        DuplicateName,
        DuplicateSid,
        UserHasMembers,
        ReservedSid,
        ZeroMask,
        UnknownSid,
        OrphanInheritOnly,
        UndefinedBits,
        UnresolvedAccount,
        SynthesizedFolder,
    };

    Kind kind;
    std::string subject;
    std::string detail;

    bool operator==(const Defect&) const = default;
};

const char* to_string(Defect::Kind kind) noexcept;

class ValidationFailure : public Error {
public:
    explicit ValidationFailure(std::vector<Defect> defects);
    const std::vector<Defect>& defects() const noexcept { return defects_; }

private:
    std::vector<Defect> defects_;
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

class UnknownColumn : public Error {
public:
    explicit UnknownColumn(const std::string& name) : Error("unknown report column: " + name) {}
};

}  // namespace aclaudit
