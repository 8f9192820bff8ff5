#pragma once

#include "stochtaylor/truncation_planner.hpp"

#include <string>
#include <variant>
#include <vector>

namespace stochtaylor {

using TableCell = std::variant<long long, double>;

struct TableRow {
    std::string label;
    std::vector<TableCell> cells;
};

/**
 * @brief One reproduced table: integer orders (ids 1-13), normalized errors at the
 * distinct-case order (ids 14-22) or the exact versus k!-bound comparison (ids 23-25).
 */
struct Table {
    int id = 0;
    std::string title;
    std::string corner;
    std::vector<std::string> columns;
    std::vector<TableRow> rows;

    const TableRow& row(const std::string& label) const;
    long long integer(const std::string& row_label, std::size_t column) const;
    double real(const std::string& row_label, std::size_t column) const;
};

inline constexpr int kTableCount = 25;

Table reproduce_table(int id, TensorCache& cache = default_tensor_cache());

enum class TableFormat { Csv, Markdown };

/** Integers verbatim, reals with 6 decimals. */
std::string format_table(const Table& table, TableFormat format);
std::string format_cell(const TableCell& cell);

}  // namespace stochtaylor
