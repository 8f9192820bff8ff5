#include "stochtaylor/coeff_engine.hpp"
#include "stochtaylor/error_calculus.hpp"
#include "stochtaylor/errors.hpp"
#include "stochtaylor/integral_sampler.hpp"
#include "stochtaylor/legendre.hpp"
#include "stochtaylor/monte_carlo.hpp"
#include "stochtaylor/sde_problems.hpp"
#include "stochtaylor/tables.hpp"
#include "stochtaylor/taylor_schemes.hpp"
#include "stochtaylor/truncation_planner.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace stochtaylor;

namespace {

// Rationals cross the boundary as "num/den" strings; the package wraps them in Fraction.
std::string rational_str(const Rational& r) { return r.get_str(); }

py::list table_rows(const Table& t) {
    py::list rows;
    for (const auto& row : t.rows) {
        py::list cells;
        for (const auto& c : row.cells) std::visit([&](auto v) { cells.append(v); }, c);
        rows.append(py::make_tuple(row.label, cells));
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_stochtaylor, m) {
    m.doc() = "Exact Fourier-Legendre coefficients, truncation orders and strong Taylor schemes";

    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<StoreError>(m, "StoreError", PyExc_OSError);

    m.def("legendre_p", &legendre_p, py::arg("n"), py::arg("x"));

    m.def(
        "bar_coefficient",
        [](const std::string& profile, std::vector<int> j) {
            return rational_str(bar_coefficient(WeightProfile::parse(profile), j));
        },
        py::arg("profile"), py::arg("j"));
    m.def(
        "scaled_coefficient",
        [](const std::string& profile, std::vector<int> j, double h) {
            return scaled_coefficient(WeightProfile::parse(profile), j, h);
        },
        py::arg("profile"), py::arg("j"), py::arg("h"));
    m.def(
        "exact_norm", [](const std::string& profile) { return rational_str(exact_norm(WeightProfile::parse(profile)).value); },
        py::arg("profile"));

    m.def(
        "exact_error",
        [](const std::string& profile, const std::string& pattern, int p, double h) {
            const WeightProfile w = WeightProfile::parse(profile);
            const ErrorResult r = exact_error(w, IndexPattern::parse(pattern, w.k()), p, h);
            return py::make_tuple(r.value, r.normalized);
        },
        py::arg("profile"), py::arg("pattern"), py::arg("p"), py::arg("h"),
        "Mean-square error and its normalized value E / h^(k + 2 sum l).");
    m.def(
        "normalized_error_exact",
        [](const std::string& profile, const std::string& pattern, int p) {
            const WeightProfile w = WeightProfile::parse(profile);
            const auto tensor = default_tensor_cache().get(w, p);
            return rational_str(normalized_error_exact(*tensor, IndexPattern::parse(pattern, w.k()), p));
        },
        py::arg("profile"), py::arg("pattern"), py::arg("p"));

    m.def(
        "minimal_order",
        [](const std::string& profile, const std::string& pattern, int exponent, double h, double constant,
           bool strict) {
            const WeightProfile w = WeightProfile::parse(profile);
            return minimal_order(w, IndexPattern::parse(pattern, w.k()), Condition{exponent, constant, strict}, h);
        },
        py::arg("profile"), py::arg("pattern"), py::arg("exponent"), py::arg("h"), py::arg("constant") = 1.0,
        py::arg("strict") = false);
    m.def(
        "check_hypothesis",
        [](const std::string& profile, int exponent, double h) {
            const HypothesisReport r =
                check_hypothesis(WeightProfile::parse(profile), Condition{exponent, 1.0, false}, h);
            py::dict orders;
            for (const auto& e : r.entries) orders[py::str(e.label)] = e.q;
            return py::make_tuple(r.distinct_q, orders, r.violations());
        },
        py::arg("profile"), py::arg("exponent"), py::arg("h"),
        "(distinct-case order, order per other pattern, labels that exceed it).");
    m.def(
        "scheme_plan",
        [](const std::string& order, double h, double constant) {
            py::list items;
            for (const auto& item : scheme_plan(parse_scheme_order(order), h, constant).items)
                items.append(py::make_tuple(item.name, item.profile.str(), item.order));
            return items;
        },
        py::arg("order"), py::arg("h"), py::arg("constant") = 1.0);

    m.def(
        "reproduce_table",
        [](int id) {
            const Table t = reproduce_table(id);
            return py::make_tuple(t.columns, table_rows(t));
        },
        py::arg("id"), "(column headers, [(row label, cells)]).");
    m.def(
        "format_table",
        [](int id, const std::string& format) {
            return format_table(reproduce_table(id), format == "md" ? TableFormat::Markdown : TableFormat::Csv);
        },
        py::arg("id"), py::arg("format") = "csv");

    m.def(
        "sample_ito",
        [](const std::string& profile, std::vector<int> indices, double h, int p, const Eigen::MatrixXd& zeta) {
            GaussianPanel panel(static_cast<int>(zeta.rows()), static_cast<int>(zeta.cols()) - 1);
            panel.matrix() = zeta;
            return sample_ito(IntegralSpec(WeightProfile::parse(profile), std::move(indices), h), p, panel);
        },
        py::arg("profile"), py::arg("indices"), py::arg("h"), py::arg("p"), py::arg("zeta"),
        "Truncated expansion from a panel zeta[i - 1, j] of standard normals.");
    m.def(
        "mse_experiment",
        [](const std::string& profile, std::vector<int> indices, double h, std::vector<int> orders,
           std::uint64_t paths, int grid, std::uint64_t seed) {
            MseOptions options;
            options.paths = paths;
            options.grid = grid;
            options.seed = seed;
            py::list rows;
            for (const auto& r :
                 mse_experiment(IntegralSpec(WeightProfile::parse(profile), std::move(indices), h), orders, options))
                rows.append(py::make_tuple(r.p, r.exact, r.empirical, r.std_error));
            return rows;
        },
        py::arg("profile"), py::arg("indices"), py::arg("h"), py::arg("orders"), py::arg("paths") = 10'000,
        py::arg("grid") = 256, py::arg("seed") = 1, "[(p, exact, empirical, standard error)].");

    m.def("problem_names", &problem_names);
    m.def(
        "strong_order",
        [](const std::string& problem, const std::string& scheme, std::vector<double> steps, std::uint64_t paths,
           std::uint64_t seed) {
            StrongOrderOptions options;
            options.paths = paths;
            options.seed = seed;
            const StrongOrderResult r = estimate_strong_order(make_problem(problem), parse_scheme(scheme), steps, options);
            py::list points;
            for (const auto& pt : r.points) points.append(py::make_tuple(pt.h, pt.mean_error, pt.std_error));
            return py::make_tuple(r.slope, r.slope_std_error, points);
        },
        py::arg("problem"), py::arg("scheme"), py::arg("steps"), py::arg("paths") = 2'000, py::arg("seed") = 1,
        "(slope, slope standard error, [(h, mean error, standard error)]).");
}
