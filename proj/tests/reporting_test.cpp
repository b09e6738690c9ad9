#include "aclaudit/reporting.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "aclaudit/fixtures.hpp"
#include "test_support.hpp"

namespace aclaudit {
namespace {

using R = ReportRight;
using testing::Lab;

RightsMatrix lab_matrix(std::vector<ReportRight> rights = {kAllRights.begin(), kAllRights.end()}) {
    static const auto lab = gen_lab_fixture(FixtureVariant::Icacls);
    std::vector<std::string> folders;
    for (const auto name : kLibraryFolders) folders.push_back("C:/Library/" + std::string(name));
    const std::vector<Sid> users{Lab::user('B'), Lab::user('A')};
    return build_matrix(lab, users, folders, rights);
}

TEST(ReportTableTest, HeaderFollowsReportOrder) {
    const std::vector<ReportRight> rights{R::FullControl, R::ListDirectory, R::Read};
    const auto table = make_table(lab_matrix(rights), rights);
    EXPECT_EQ(table.header, (std::vector<std::string>{"User", "Directory", "ListDirectory", "Read", "FullControl"}));
    ASSERT_EQ(table.rows.size(), 20u);
    EXPECT_EQ(table.rows[0][0], "User-B");
    EXPECT_EQ(table.rows[0][1], "C:/Library/Accounts");
    EXPECT_EQ(table.rows[10][0], "User-A");
}

TEST(ReportTableTest, FullHeader) {
    const auto table = make_table(lab_matrix(), kAllRights);
    ASSERT_EQ(table.header.size(), 21u);
    EXPECT_EQ(table.header[2], "ListDirectory");
    EXPECT_EQ(table.header[8], "DeleteSubdirectoriesAndFiles");
    EXPECT_EQ(table.header[20], "FullControl");
}

TEST(CsvTest, CrlfAndQuoting) {
    ReportTable table{{"User", "Directory"}, {{"a,b", "say \"hi\""}, {"plain", "line\nbreak"}}};
    EXPECT_EQ(render_csv(table), "User,Directory\r\n\"a,b\",\"say \"\"hi\"\"\"\r\nplain,\"line\nbreak\"\r\n");
}

TEST(CsvTest, RoundTripIsLossless) {
    const auto table = make_table(lab_matrix(), kAllRights);
    auto records = parse_csv(render_csv(table));
    ASSERT_EQ(records.size(), table.rows.size() + 1);
    EXPECT_EQ(records.front(), table.header);
    records.erase(records.begin());
    EXPECT_EQ(records, table.rows);

    ReportTable odd{{"User", "Directory"}, {{"x\"", ""}, {"", "R&D, \"old\"\r\nnew"}}};
    auto back = parse_csv(render_csv(odd));
    back.erase(back.begin());
    EXPECT_EQ(back, odd.rows);
}

TEST(SortTableTest, YesBeforeNoAndStable) {
    const auto table = make_table(lab_matrix(), kAllRights);
    const auto sorted = sort_table(table, "FullControl", SortDirection::Ascending);
    // The rotating entry gives User-A FullControl on Accounts and Projects. User-B's
    // entries on Archive and R&D lose to the Sample Group deny.
    ASSERT_EQ(sorted.rows.size(), table.rows.size());
    EXPECT_EQ(sorted.rows[0][0], "User-A");
    EXPECT_EQ(sorted.rows[0][1], "C:/Library/Accounts");
    EXPECT_EQ(sorted.rows[0].back(), "Yes");
    EXPECT_EQ(sorted.rows[1][1], "C:/Library/Projects");
    EXPECT_EQ(sorted.rows[1].back(), "Yes");
    // Ties keep the input order.
    EXPECT_EQ(sorted.rows[2][0], "User-B");
    EXPECT_EQ(sorted.rows[2][1], "C:/Library/Accounts");
    EXPECT_EQ(sorted.rows.back().back(), "No");

    const auto by_user = sort_table(table, "User", SortDirection::Ascending);
    EXPECT_EQ(by_user.rows[0][0], "User-A");
    EXPECT_EQ(by_user.rows[0][1], "C:/Library/Accounts");
    EXPECT_EQ(by_user.rows[9][1], "C:/Library/Working");
    const auto desc = sort_table(table, "Directory", SortDirection::Descending);
    EXPECT_EQ(desc.rows[0][1], "C:/Library/Working");
    EXPECT_EQ(desc.rows[0][0], "User-B");

    EXPECT_THROW(sort_table(table, "Execute", SortDirection::Ascending), UnknownColumn);
}

TEST(SortTableTest, IsAPermutation) {
    const auto table = make_table(lab_matrix(), kAllRights);
    for (const auto& column : table.header) {
        for (const auto dir : {SortDirection::Ascending, SortDirection::Descending}) {
            const auto sorted = sort_table(table, column, dir);
            EXPECT_TRUE(std::is_permutation(sorted.rows.begin(), sorted.rows.end(), table.rows.begin(), table.rows.end()));
            EXPECT_EQ(sorted.header, table.header);
        }
    }
}

}  // namespace
}  // namespace aclaudit
