#include "stochtaylor/errors.hpp"
#include "stochtaylor/tables.hpp"

#include <gtest/gtest.h>

using namespace stochtaylor;

TEST(FormatCell, IntegersVerbatimRealsSixDecimals) {
    EXPECT_EQ(format_cell(TableCell{512LL}), "512");
    EXPECT_EQ(format_cell(TableCell{0.0101537}), "0.010154");
    EXPECT_EQ(format_cell(TableCell{4.2e-5}), "0.000042");
}

TEST(ReproduceTable, MilsteinTable) {
    const Table t = reproduce_table(10);
    EXPECT_EQ(t.id, 10);
    ASSERT_EQ(t.columns.size(), 4u);
    EXPECT_EQ(t.integer("q(2.1.a)", 1), 2);
    EXPECT_EQ(t.integer("q(2.1.a)", 2), 32);
    EXPECT_EQ(t.integer("q(2.1.a)", 3), 512);
    EXPECT_THROW(t.row("q(9.9)"), DomainError);
}

TEST(ReproduceTable, ComparisonTable) {
    const Table t = reproduce_table(23);
    EXPECT_EQ(t.integer("p", 5), 8);
    EXPECT_EQ(t.integer("(p+1)^3", 5), 729);
    EXPECT_EQ(t.integer("p'", 5), 48);
    EXPECT_EQ(t.integer("(p'+1)^3", 5), 117649);
}

TEST(ReproduceTable, ErrorTable) {
    const Table t = reproduce_table(16);
    EXPECT_EQ(t.integer("q(2.1.b)", 0), 4);
    EXPECT_NEAR(t.real("E(2.2.b)", 0), 0.000042, 5e-7);
}

TEST(ReproduceTable, RejectsUnknownId) {
    EXPECT_THROW(reproduce_table(0), DomainError);
    EXPECT_THROW(reproduce_table(26), DomainError);
}

TEST(FormatTable, CsvAndMarkdownLayouts) {
    const Table t = reproduce_table(10);
    const std::string csv = format_table(t, TableFormat::Csv);
    EXPECT_NE(csv.find("T-t,2^-1,2^-4,2^-8,2^-12\n"), std::string::npos) << csv;
    EXPECT_NE(csv.find("q(2.1.a),0,2,32,512\n"), std::string::npos) << csv;

    const std::string md = format_table(t, TableFormat::Markdown);
    EXPECT_NE(md.find("| T-t | 2^-1 | 2^-4 | 2^-8 | 2^-12 |"), std::string::npos) << md;
    EXPECT_NE(md.find("|---|---:|---:|---:|---:|"), std::string::npos) << md;
    EXPECT_NE(md.find("| q(2.1.a) | 0 | 2 | 32 | 512 |"), std::string::npos) << md;
}
