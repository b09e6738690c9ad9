#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aclaudit/evaluator.hpp"

namespace aclaudit {

/// "User", "Directory", then one Yes/No column per selected right.
struct ReportTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const ReportTable&) const = default;
};

enum class SortDirection { Ascending, Descending };

/// Columns follow report order regardless of the order in `rights`.
ReportTable make_table(const RightsMatrix& matrix, std::span<const ReportRight> rights);

/// Comma separated, CRLF line ends, fields quoted only when they contain a
/// comma, quote or line break.
std::string render_csv(const ReportTable& table);
std::string render_csv(const RightsMatrix& matrix, std::span<const ReportRight> rights);

/// Reads CSV written by render_csv (RFC 4180 quoting).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Stable. Text columns compare case-insensitively; right columns put Yes
/// before No when ascending. Throws UnknownColumn.
ReportTable sort_table(const ReportTable& table, std::string_view column, SortDirection direction);

}  // namespace aclaudit
