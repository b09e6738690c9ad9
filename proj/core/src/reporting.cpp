#include "aclaudit/reporting.hpp"

#include <algorithm>

namespace aclaudit {

ReportTable make_table(const RightsMatrix& matrix, std::span<const ReportRight> rights) {
    std::vector<ReportRight> columns;
    for (const auto r : kAllRights) {
        if (std::find(rights.begin(), rights.end(), r) != rights.end()) columns.push_back(r);
    }
    ReportTable table;
    table.header = {"User", "Directory"};
    for (const auto r : columns) table.header.emplace_back(name_of(r));
    for (const auto& row : matrix.rows) {
        std::vector<std::string> cells{row.user_name, row.folder};
        for (const auto r : columns) cells.emplace_back(row.value(r) ? "Yes" : "No");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

namespace {

void append_field(std::string& out, std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        out += field;
        return;
    }
    out += '"';
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

void append_record(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        append_field(out, fields[i]);
    }
    out += "\r\n";
}

}  // namespace

std::string render_csv(const ReportTable& table) {
    std::string out;
    append_record(out, table.header);
    for (const auto& row : table.rows) append_record(out, row);
    return out;
}

std::string render_csv(const RightsMatrix& matrix, std::span<const ReportRight> rights) {
    return render_csv(make_table(matrix, rights));
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool pending = false;  // something seen on the current record
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"': quoted = true; pending = true; break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                pending = true;
                break;
            case '\r': break;
            case '\n':
                record.push_back(std::move(field));
                field.clear();
                records.push_back(std::move(record));
                record.clear();
                pending = false;
                break;
            default: field += c; pending = true;
        }
    }
    if (pending) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

ReportTable sort_table(const ReportTable& table, std::string_view column, SortDirection direction) {
    const auto it = std::find(table.header.begin(), table.header.end(), column);
    if (it == table.header.end()) throw UnknownColumn(std::string(column));
    const auto col = static_cast<std::size_t>(it - table.header.begin());
    const bool yes_no = col >= 2;

    auto key = [&](const std::vector<std::string>& row) {
        if (yes_no) return std::string(row[col] == "Yes" ? "0" : "1");
        return to_lower(row[col]);
    };
    ReportTable out = table;
    std::stable_sort(out.rows.begin(), out.rows.end(), [&](const auto& a, const auto& b) {
        return direction == SortDirection::Ascending ? key(a) < key(b) : key(b) < key(a);
    });
    return out;
}

}  // namespace aclaudit
