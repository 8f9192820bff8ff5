#include "stochtaylor/tables.hpp"

#include "stochtaylor/errors.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace stochtaylor {

const TableRow& Table::row(const std::string& label) const {
    for (const auto& r : rows)
        if (r.label == label) return r;
    throw DomainError("table " + std::to_string(id) + " has no row '" + label + "'");
}

long long Table::integer(const std::string& row_label, std::size_t column) const {
    return std::get<long long>(row(row_label).cells.at(column));
}

double Table::real(const std::string& row_label, std::size_t column) const {
    return std::get<double>(row(row_label).cells.at(column));
}

namespace {

struct Column {
    std::string label;
    double h;
};

struct Cell {
    WeightProfile profile;
    IndexPattern pattern;
    double h;
};

Column decimal(const char* text) { return {text, std::stod(text)}; }

// 2^{-num/den}
Column dyadic(int num, int den = 1) {
    std::string label = "2^-" + std::to_string(num);
    if (den != 1) label += "/" + std::to_string(den);
    return {label, std::pow(2.0, -static_cast<double>(num) / den)};
}

struct RowSpec {
    WeightProfile profile;
    IndexPattern pattern;
};

RowSpec spec(const char* profile, const char* label) {
    return {WeightProfile::parse(profile), pattern_from_label(label)};
}

std::vector<RowSpec> family_rows(const char* profile, bool with_all_equal) {
    const auto wp = WeightProfile::parse(profile);
    std::vector<RowSpec> rows;
    for (const auto& pattern : catalog_patterns(wp.k())) {
        if (pattern.is_all_equal() && !with_all_equal) continue;
        rows.push_back({wp, pattern});
    }
    return rows;
}

void append(std::vector<RowSpec>& to, const std::vector<RowSpec>& from) { to.insert(to.end(), from.begin(), from.end()); }

struct Builder {
    TensorCache& cache;

    int q(const WeightProfile& profile, const IndexPattern& pattern, int exponent, double h) const {
        return minimal_order(profile, pattern, Condition{exponent, 1.0, false}, h, cache);
    }

    Table q_grid(int id, std::string title, const std::vector<Column>& cols, const std::vector<RowSpec>& rows,
                 int exponent) const {
        Table t{id, std::move(title), "T-t", {}, {}};
        for (const auto& c : cols) t.columns.push_back(c.label);
        for (const auto& r : rows) {
            TableRow row{"q(" + full_case_label(r.pattern, r.profile) + ")", {}};
            for (const auto& c : cols) row.cells.emplace_back(static_cast<long long>(q(r.profile, r.pattern, exponent, c.h)));
            t.rows.push_back(std::move(row));
        }
        return t;
    }

    // Errors of each pattern at the order chosen for the distinct pattern of the same profile.
    Table e_grid(int id, std::string title, const std::vector<Column>& cols, const std::vector<RowSpec>& rows,
                 int exponent) const {
        Table t{id, std::move(title), "T-t", {}, {}};
        for (const auto& c : cols) t.columns.push_back(c.label);
        for (const auto& r : rows) {
            const auto label = full_case_label(r.pattern, r.profile);
            TableRow qrow{"q(" + label + ")", {}};
            TableRow erow{"E(" + label + ")", {}};
            for (const auto& c : cols) {
                const int qd = q(r.profile, IndexPattern::distinct(r.profile.k()), exponent, c.h);
                const auto tensor = cache.get(r.profile, qd);
                qrow.cells.emplace_back(static_cast<long long>(qd));
                erow.cells.emplace_back(std::max(normalized_error_curve(*tensor, r.pattern, qd).back(), 0.0));
            }
            t.rows.push_back(std::move(qrow));
            t.rows.push_back(std::move(erow));
        }
        return t;
    }

    // Rows are patterns, columns are weight profiles at one step.
    Table profile_grid(int id, std::string title, double h, const std::vector<const char*>& profiles, int exponent,
                       bool errors) const {
        Table t{id, std::move(title), "case", {}, {}};
        for (const char* p : profiles) t.columns.push_back("I(" + std::string(p) + ")");
        for (const auto& pattern : catalog_patterns(3)) {
            const auto label = case_label(pattern);
            TableRow qrow{"q(" + label + ")", {}};
            TableRow erow{"E(" + label + ")", {}};
            for (const char* p : profiles) {
                const auto wp = WeightProfile::parse(p);
                if (!errors) {
                    qrow.cells.emplace_back(static_cast<long long>(q(wp, pattern, exponent, h)));
                    continue;
                }
                const int qd = q(wp, IndexPattern::distinct(3), exponent, h);
                const auto tensor = cache.get(wp, qd);
                qrow.cells.emplace_back(static_cast<long long>(qd));
                erow.cells.emplace_back(std::max(normalized_error_curve(*tensor, pattern, qd).back(), 0.0));
            }
            t.rows.push_back(std::move(qrow));
            if (errors) t.rows.push_back(std::move(erow));
        }
        return t;
    }

    Table single_step_k5(int id, const char* step, bool errors) const {
        const double h = std::stod(step);
        std::vector<RowSpec> rows = family_rows("00000", false);
        std::string title = std::string("T-t = ") + step + ", I(00000), " +
                            (errors ? "E = error / (T-t)^5 at q(5.1)" : "minimal orders, condition exponent 6");
        return errors ? e_grid(id, title, {Column{step, h}}, rows, 6) : q_grid(id, title, {Column{step, h}}, rows, 6);
    }

    Table kfact(int id, std::string title, const char* profile, const std::vector<Column>& cols, int exponent,
                const char* name) const {
        const auto wp = WeightProfile::parse(profile);
        const int k = wp.k();
        Table t{id, std::move(title), "T-t", {}, {}};
        for (const auto& c : cols) t.columns.push_back(c.label);
        const std::string n(name);
        const std::string kk = std::to_string(k);
        TableRow r1{n, {}}, r2{"(" + n + "+1)^" + kk, {}}, r3{n + "'", {}}, r4{"(" + n + "'+1)^" + kk, {}};
        for (const auto& c : cols) {
            const Condition cond{exponent, 1.0, false};
            const int p = minimal_order(wp, IndexPattern::distinct(k), cond, c.h, cache);
            const int pk = minimal_order_kfact(wp, cond, c.h, cache);
            r1.cells.emplace_back(static_cast<long long>(p));
            r2.cells.emplace_back(static_cast<long long>(box_size(k, p)));
            r3.cells.emplace_back(static_cast<long long>(pk));
            r4.cells.emplace_back(static_cast<long long>(box_size(k, pk)));
        }
        t.rows = {r1, r2, r3, r4};
        return t;
    }
};

std::vector<RowSpec> k3_zero_rows() {
    return {spec("000", "3.1"), spec("000", "3.3.1"), spec("000", "3.3.2"), spec("000", "3.3.3")};
}

std::vector<RowSpec> k2_weighted_rows() {
    return {spec("01", "2.1"), spec("01", "2.2"), spec("10", "2.1"), spec("10", "2.2")};
}

std::vector<RowSpec> scheme_rows(int exponent) {
    std::vector<RowSpec> rows{spec("00", "2.1")};
    append(rows, k3_zero_rows());
    if (exponent >= 5) {
        append(rows, k2_weighted_rows());
        append(rows, family_rows("0000", false));
    }
    if (exponent >= 6) {
        append(rows, family_rows("001", true));
        append(rows, family_rows("010", true));
        append(rows, family_rows("100", true));
        append(rows, family_rows("00000", true));
    }
    return rows;
}

}  // namespace

Table reproduce_table(int id, TensorCache& cache) {
    const Builder b{cache};
    const std::vector<Column> t1 = {decimal("0.011"), decimal("0.008"), decimal("0.0045"),
                                    decimal("0.0035"), decimal("0.0027"), decimal("0.0025")};
    const std::vector<Column> t2 = {decimal("0.010"), decimal("0.005"), decimal("0.0025")};
    const std::vector<Column> t4 = {decimal("0.011"), decimal("0.008"), decimal("0.0045"), decimal("0.0042"),
                                    decimal("0.0040")};
    static const char* k5_steps[] = {"0.011", "0.008", "0.0045", "0.0042", "0.0035"};
    switch (id) {
        case 1: return b.q_grid(1, "I(000), minimal orders, condition exponent 4", t1, k3_zero_rows(), 4);
        case 2: return b.q_grid(2, "I(01) and I(10), minimal orders, condition exponent 5", t2, k2_weighted_rows(), 5);
        case 3: return b.profile_grid(3, "T-t = 0.01, minimal orders, condition exponent 6", 0.01, {"001", "010", "100"}, 6, false);
        case 4: return b.q_grid(4, "I(0000), minimal orders, condition exponent 5", t4, family_rows("0000", false), 5);
        case 5: case 6: case 7: case 8: case 9: return b.single_step_k5(id, k5_steps[id - 5], false);
        case 10: return b.q_grid(10, "Order 1.0 scheme, I(00), condition exponent 3",
                                 {dyadic(1), dyadic(4), dyadic(8), dyadic(12)}, {spec("00", "2.1")}, 3);
        case 11: return b.q_grid(11, "Order 1.5 scheme, condition exponent 4",
                                 {dyadic(1), dyadic(3), dyadic(5), dyadic(8)}, scheme_rows(4), 4);
        case 12: return b.q_grid(12, "Order 2.0 scheme, condition exponent 5",
                                 {dyadic(1), dyadic(2), dyadic(3), dyadic(4)}, scheme_rows(5), 5);
        case 13: return b.q_grid(13, "Order 2.5 scheme, condition exponent 6",
                                 {dyadic(1), dyadic(3, 2), dyadic(2), dyadic(5, 2)}, scheme_rows(6), 6);
        case 14: return b.e_grid(14, "I(000), E = error / (T-t)^3 at q(3.1.a)", t1, k3_zero_rows(), 4);
        case 15: {
            std::vector<Column> cols(t4.begin(), t4.begin() + 4);
            return b.e_grid(15, "I(0000), E = error / (T-t)^4 at q(4.1)", cols, family_rows("0000", false), 5);
        }
        case 16: return b.e_grid(16, "I(01) and I(10), E = error / (T-t)^4 at q(2.1)", t2, k2_weighted_rows(), 5);
        case 17: case 18: case 19: case 20: case 21: return b.single_step_k5(id, k5_steps[id - 17], true);
        case 22: return b.profile_grid(22, "T-t = 0.01, E = error / (T-t)^5 at q(3.1)", 0.01, {"001", "010", "100"}, 6, true);
        case 23: return b.kfact(23, "I(000): exact condition versus the 3! bound, exponent 4", "000",
                                {dyadic(1), dyadic(2), dyadic(3), dyadic(4), dyadic(5), dyadic(6)}, 4, "p");
        case 24: return b.kfact(24, "I(0000): exact condition versus the 4! bound, exponent 5", "0000",
                                {dyadic(1), dyadic(3, 2), dyadic(2), dyadic(5, 2), dyadic(3), dyadic(7, 2)}, 5, "q");
        case 25: return b.kfact(25, "I(00000): exact condition versus the 5! bound, exponent 6", "00000",
                                {dyadic(1, 8), dyadic(1, 4), dyadic(1, 2), dyadic(3, 4), dyadic(1)}, 6, "r");
        default: throw DomainError("table id must lie in 1.." + std::to_string(kTableCount));
    }
}

std::string format_cell(const TableCell& cell) {
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", std::get<double>(cell));
    return buf;
}

std::string format_table(const Table& table, TableFormat format) {
    std::ostringstream os;
    if (format == TableFormat::Csv) {
        os << table.corner;
        for (const auto& c : table.columns) os << ',' << c;
        os << '\n';
        for (const auto& r : table.rows) {
            os << r.label;
            for (const auto& cell : r.cells) os << ',' << format_cell(cell);
            os << '\n';
        }
        return os.str();
    }
    os << "Table " << table.id << ": " << table.title << "\n\n";
    os << "| " << table.corner;
    for (const auto& c : table.columns) os << " | " << c;
    os << " |\n|---";
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << "|---:";
    os << "|\n";
    for (const auto& r : table.rows) {
        os << "| " << r.label;
        for (const auto& cell : r.cells) os << " | " << format_cell(cell);
        os << " |\n";
    }
    return os.str();
}

}  // namespace stochtaylor
