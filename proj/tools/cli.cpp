#include "cli.hpp"

#include "stochtaylor/coeff_store.hpp"
#include "stochtaylor/error_calculus.hpp"
#include "stochtaylor/errors.hpp"
#include "stochtaylor/monte_carlo.hpp"
#include "stochtaylor/sde_problems.hpp"
#include "stochtaylor/tables.hpp"
#include "stochtaylor/taylor_schemes.hpp"
#include "stochtaylor/truncation_planner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>

namespace stochtaylor::cli {

namespace {

using json = nlohmann::ordered_json;

enum class Format { Csv, Markdown, JsonLines };

std::string number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string text_of(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) return number(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

/** Collects a header of resolved settings and one result grid, then prints both. */
class Report {
public:
    Report(std::string command, Format format) : command_(std::move(command)), format_(format) {}

    void config(const std::string& key, json value) { config_[key] = std::move(value); }
    void columns(std::vector<std::string> names) { columns_ = std::move(names); }
    void row(std::vector<json> cells) { rows_.push_back(std::move(cells)); }
    void note(const std::string& key, json value) { notes_[key] = std::move(value); }
    /** Preformatted grid printed under the header instead of the columns and rows. */
    void body(std::string text) { body_ = std::move(text); }

    void print(std::ostream& out) const {
        switch (format_) {
        case Format::JsonLines: {
            json head;
            head["command"] = command_;
            head["config"] = config_;
            out << head.dump() << '\n';
            for (const auto& r : rows_) {
                json line;
                for (std::size_t c = 0; c < columns_.size(); ++c) line[columns_[c]] = r[c];
                out << line.dump() << '\n';
            }
            if (!notes_.empty()) {
                json tail;
                tail["summary"] = notes_;
                out << tail.dump() << '\n';
            }
            break;
        }
        case Format::Csv:
            out << "# command: " << command_ << '\n';
            for (const auto& [k, v] : config_.items()) out << "# " << k << ": " << text_of(v) << '\n';
            if (body_) {
                out << *body_;
                break;
            }
            for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
            out << '\n';
            for (const auto& r : rows_) {
                for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << text_of(r[c]);
                out << '\n';
            }
            for (const auto& [k, v] : notes_.items()) out << "# " << k << ": " << text_of(v) << '\n';
            break;
        case Format::Markdown:
            out << "> command: " << command_ << "  \n";
            for (const auto& [k, v] : config_.items()) out << "> " << k << ": " << text_of(v) << "  \n";
            out << '\n';
            if (body_) {
                out << *body_;
                break;
            }
            out << '|';
            for (const auto& c : columns_) out << ' ' << c << " |";
            out << "\n|";
            for (std::size_t c = 0; c < columns_.size(); ++c) out << "---|";
            out << '\n';
            for (const auto& r : rows_) {
                out << '|';
                for (const auto& cell : r) out << ' ' << text_of(cell) << " |";
                out << '\n';
            }
            if (!notes_.empty()) {
                out << '\n';
                for (const auto& [k, v] : notes_.items()) out << "- " << k << ": " << text_of(v) << '\n';
            }
            break;
        }
    }

private:
    std::string command_;
    Format format_;
    json config_ = json::object();
    std::vector<std::string> columns_;
    std::vector<std::vector<json>> rows_;
    json notes_ = json::object();
    std::optional<std::string> body_;
};

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw CLI::ValidationError("expected a comma list of integers, got '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("empty integer list");
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw CLI::ValidationError("expected a comma list of numbers, got '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw CLI::ValidationError("empty number list");
    return out;
}

struct Globals {
    std::string format = "csv";
    std::string store;
    bool offline = false;
};

Format parse_format(const std::string& text) {
    if (text == "csv") return Format::Csv;
    if (text == "md" || text == "markdown") return Format::Markdown;
    return Format::JsonLines;
}

std::filesystem::path store_dir(const Globals& g) {
    return g.store.empty() ? default_store_dir() : std::filesystem::path(g.store);
}

void echo_globals(Report& report, const Globals& g) {
    report.config("format", g.format);
    report.config("store", store_dir(g).string());
    report.config("offline", g.offline);
}

OracleRule parse_rule(const std::string& text) {
    return text == "left" ? OracleRule::LeftPoint : OracleRule::CellCorrected;
}

PlanPolicy parse_policy(const std::string& text) {
    return text == "distinct" ? PlanPolicy::Distinct : PlanPolicy::PerPattern;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fourier-Legendre approximation of iterated Ito integrals and strong Taylor-Ito schemes",
                 "stochtaylor"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_flag("--help", "Print this help message and exit");
    Globals g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "md", "markdown", "jsonl"}))
        ->capture_default_str();
    app.add_option("--store", g.store, "Coefficient store directory (default $STOCHTAYLOR_STORE or the user cache)");
    app.add_flag("--offline", g.offline, "Fail instead of building tensors missing from the store");

    std::function<void()> action;

    auto make_cache = [&]() {
        TensorCache::Options opts;
        opts.store_dir = store_dir(g);
        opts.offline = g.offline;
        return std::make_unique<TensorCache>(opts);
    };

    // coeffs build | verify
    auto* coeffs = app.add_subcommand("coeffs", "Build or verify stored coefficient tensors");
    coeffs->require_subcommand(1);
    std::string c_weights;
    int c_p = 0;
    bool c_force = false;
    auto* build = coeffs->add_subcommand("build", "Compute the tensor over {0..p}^k and write it to the store");
    build->add_option("--weights", c_weights, "Weight exponents l_1..l_k, e.g. 0,0,1")->required();
    build->add_option("--p", c_p, "Cap")->required()->check(CLI::NonNegativeNumber);
    build->add_flag("--force", c_force, "Overwrite an existing file");
    build->callback([&] {
        action = [&] {
            const auto profile = WeightProfile::parse(c_weights);
            const auto tensor = build_tensor(profile, c_p);
            const auto path = store_file(store_dir(g), profile);
            std::filesystem::create_directories(path.parent_path());
            const auto checksum = save(tensor, path, c_force);
            Report report("coeffs build", parse_format(g.format));
            echo_globals(report, g);
            report.config("weights", profile.str());
            report.config("p", c_p);
            report.config("force", c_force);
            report.columns({"profile", "cap", "nonzeros", "records", "checksum", "file"});
            char hex[16];
            std::snprintf(hex, sizeof hex, "%08llx", static_cast<unsigned long long>(checksum));
            report.row({profile.str(), c_p, tensor.nonzeros().size(), tensor.box_size(), std::string(hex), path.string()});
            report.print(out);
        };
    });
    std::string v_weights;
    auto* verify = coeffs->add_subcommand("verify", "Reload a stored tensor and compare it with a fresh build");
    verify->add_option("--weights", v_weights, "Weight exponents")->required();
    verify->callback([&] {
        action = [&] {
            const auto profile = WeightProfile::parse(v_weights);
            const auto path = store_file(store_dir(g), profile);
            const auto header = read_header(path);
            const auto stored = load(path, profile, header.cap);
            const auto fresh = build_tensor(profile, header.cap);
            const bool ok = stored == fresh;
            Report report("coeffs verify", parse_format(g.format));
            echo_globals(report, g);
            report.config("weights", profile.str());
            report.columns({"profile", "cap", "nonzeros", "matches_rebuild", "file"});
            report.row({profile.str(), header.cap, stored.nonzeros().size(), ok, path.string()});
            report.print(out);
            if (!ok) throw StoreError(StoreErrorKind::Malformed, "stored tensor differs from a fresh build: " + path.string());
        };
    });

    // error
    auto* error = app.add_subcommand("error", "Exact mean-square truncation error");
    std::string e_weights, e_pattern = "distinct", e_p;
    double e_step = 1.0;
    error->add_option("--weights", e_weights, "Weight exponents")->required();
    error->add_option("--pattern", e_pattern, "distinct, equal, a case label or Wiener indices")->capture_default_str();
    error->add_option("--p", e_p, "Comma list of caps")->required();
    error->add_option("--step", e_step, "Step T - t")->check(CLI::PositiveNumber)->capture_default_str();
    error->callback([&] {
        action = [&] {
            const auto profile = WeightProfile::parse(e_weights);
            const auto pattern = IndexPattern::parse(e_pattern, profile.k());
            const auto orders = parse_int_list(e_p);
            auto cache = make_cache();
            Report report("error", parse_format(g.format));
            echo_globals(report, g);
            report.config("weights", profile.str());
            report.config("pattern", pattern.str());
            report.config("step", e_step);
            report.columns({"p", "error", "normalized"});
            for (int p : orders) {
                const auto r = exact_error(profile, pattern, p, e_step, *cache);
                report.row({p, r.value, r.normalized});
            }
            report.print(out);
        };
    });

    // truncate
    auto* truncate = app.add_subcommand("truncate", "Minimal truncation order meeting E <= C h^r");
    int t_k = 0, t_exp = 4;
    std::string t_weights, t_pattern = "distinct";
    double t_step = 0.0, t_constant = 1.0;
    bool t_strict = false, t_kfact = false;
    truncate->add_option("--k", t_k, "Multiplicity")->check(CLI::Range(1, 6));
    truncate->add_option("--weights", t_weights, "Weight exponents (default all zero)");
    truncate->add_option("--pattern", t_pattern, "distinct, equal, a case label or Wiener indices")->capture_default_str();
    truncate->add_option("--step", t_step, "Step T - t")->required()->check(CLI::PositiveNumber);
    truncate->add_option("--order-exp", t_exp, "Exponent r of the condition")->capture_default_str();
    truncate->add_option("--constant", t_constant, "Constant C")->check(CLI::PositiveNumber)->capture_default_str();
    truncate->add_flag("--strict", t_strict, "Require E < C h^r");
    truncate->add_flag("--kfact", t_kfact, "Use the k! bound instead of the exact error");
    truncate->callback([&] {
        action = [&] {
            if (t_weights.empty() && t_k == 0) throw CLI::ValidationError("truncate needs --k or --weights");
            const auto profile = t_weights.empty() ? WeightProfile::zeros(t_k) : WeightProfile::parse(t_weights);
            if (t_k != 0 && profile.k() != t_k) throw CLI::ValidationError("--k disagrees with --weights");
            const Condition cond{t_exp, t_constant, t_strict};
            auto cache = make_cache();
            Report report("truncate", parse_format(g.format));
            echo_globals(report, g);
            report.config("weights", profile.str());
            report.config("step", t_step);
            report.config("order_exp", t_exp);
            report.config("constant", t_constant);
            report.config("strict", t_strict);
            report.config("bound", t_kfact ? "kfact" : "exact");
            if (t_kfact) {
                report.config("pattern", "any");
                report.columns({"q"});
                report.row({minimal_order_kfact(profile, cond, t_step, *cache)});
            } else {
                const auto pattern = IndexPattern::parse(t_pattern, profile.k());
                report.config("pattern", pattern.str());
                report.columns({"q"});
                report.row({minimal_order(profile, pattern, cond, t_step, *cache)});
            }
            report.print(out);
        };
    });

    // plan
    auto* plan = app.add_subcommand("plan", "Truncation orders of every integral a scheme uses");
    std::string pl_scheme;
    double pl_step = 0.0, pl_constant = 1.0;
    plan->add_option("--scheme", pl_scheme, "1.0, 1.5, 2.0 or 2.5")->required();
    plan->add_option("--step", pl_step, "Step h")->required()->check(CLI::PositiveNumber);
    plan->add_option("--constant", pl_constant, "Constant C")->check(CLI::PositiveNumber)->capture_default_str();
    plan->callback([&] {
        action = [&] {
            const auto order = parse_scheme_order(pl_scheme);
            auto cache = make_cache();
            const auto tp = scheme_plan(order, pl_step, pl_constant, *cache);
            Report report("plan", parse_format(g.format));
            echo_globals(report, g);
            report.config("scheme", to_string(order));
            report.config("step", pl_step);
            report.config("constant", pl_constant);
            report.columns({"name", "profile", "order_exp", "q"});
            for (const auto& item : tp.items) report.row({item.name, item.profile.str(), item.condition.exponent, item.order});
            report.print(out);
        };
    });

    // tables
    auto* tables = app.add_subcommand("tables", "Reproduce the reference tables");
    std::string tb_id;
    tables->add_option("--id", tb_id, "Table number 1-25 or 'all'")->required();
    tables->callback([&] {
        action = [&] {
            std::vector<int> ids;
            if (tb_id == "all") {
                for (int i = 1; i <= kTableCount; ++i) ids.push_back(i);
            } else {
                ids = parse_int_list(tb_id);
            }
            for (int id : ids)
                if (id < 1 || id > kTableCount) throw CLI::ValidationError("table id must lie in 1.." + std::to_string(kTableCount));
            auto cache = make_cache();
            const Format fmt = parse_format(g.format);
            for (int id : ids) {
                const Table table = reproduce_table(id, *cache);
                Report report("tables", fmt);
                echo_globals(report, g);
                report.config("id", id);
                report.config("title", table.title);
                if (fmt == Format::JsonLines) {
                    std::vector<std::string> cols{table.corner};
                    cols.insert(cols.end(), table.columns.begin(), table.columns.end());
                    report.columns(cols);
                    for (const auto& r : table.rows) {
                        std::vector<json> cells{r.label};
                        for (const auto& c : r.cells)
                            cells.push_back(std::holds_alternative<long long>(c) ? json(std::get<long long>(c))
                                                                                  : json(format_cell(c)));
                        report.row(std::move(cells));
                    }
                    report.print(out);
                } else {
                    report.body(format_table(table, fmt == Format::Csv ? TableFormat::Csv : TableFormat::Markdown));
                    report.print(out);
                }
            }
        };
    });

    // mse
    auto* mse = app.add_subcommand("mse", "Monte Carlo mean-square error against a fine-grid oracle");
    std::string m_spec, m_i, m_p = "0,2,5", m_rule = "cell";
    double m_step = 1.0;
    std::uint64_t m_paths = 200'000, m_seed = 1;
    int m_grid = 2048;
    mse->add_option("--spec", m_spec, "Weight exponents, e.g. 00 or 0,1")->required();
    mse->add_option("--i", m_i, "Wiener indices, e.g. 1,2")->required();
    mse->add_option("--p", m_p, "Comma list of caps")->capture_default_str();
    mse->add_option("--step", m_step, "Step T - t")->check(CLI::PositiveNumber)->capture_default_str();
    mse->add_option("--paths", m_paths, "Number of paths")->capture_default_str();
    mse->add_option("--grid", m_grid, "Oracle grid cells")->capture_default_str();
    mse->add_option("--seed", m_seed, "Random seed")->capture_default_str();
    mse->add_option("--rule", m_rule, "Oracle rule")->check(CLI::IsMember({"cell", "left"}))->capture_default_str();
    mse->callback([&] {
        action = [&] {
            const IntegralSpec spec(WeightProfile::parse(m_spec), parse_int_list(m_i), m_step);
            MseOptions opts;
            opts.paths = m_paths;
            opts.grid = m_grid;
            opts.seed = m_seed;
            opts.rule = parse_rule(m_rule);
            auto cache = make_cache();
            const auto results = mse_experiment(spec, parse_int_list(m_p), opts, *cache);
            Report report("mse", parse_format(g.format));
            echo_globals(report, g);
            report.config("spec", spec.profile.str());
            report.config("i", m_i);
            report.config("step", m_step);
            report.config("paths", m_paths);
            report.config("grid", m_grid);
            report.config("seed", m_seed);
            report.config("rule", m_rule);
            report.columns({"p", "exact", "empirical", "std_error", "z"});
            for (const auto& r : results) report.row({r.p, r.exact, r.empirical, r.std_error, r.z_score()});
            report.print(out);
        };
    });

    // integrate
    auto* integ = app.add_subcommand("integrate", "Integrate an SDE with one of the strong schemes");
    std::string i_scheme, i_problem = "gbm", i_policy = "pattern";
    double i_h = 0.01, i_T = -1.0, i_constant = 1.0;
    std::uint64_t i_paths = 1000, i_seed = 1;
    integ->add_option("--scheme", i_scheme, "euler, milstein, t15, t20 or t25")->required();
    integ->add_option("--problem", i_problem, "gbm or bilinear")->capture_default_str();
    integ->add_option("--h", i_h, "Step")->check(CLI::PositiveNumber)->capture_default_str();
    integ->add_option("--T", i_T, "Horizon (default: the problem's)");
    integ->add_option("--paths", i_paths, "Number of paths")->capture_default_str();
    integ->add_option("--seed", i_seed, "Random seed")->capture_default_str();
    integ->add_option("--constant", i_constant, "Constant C of the truncation condition")->capture_default_str();
    integ->add_option("--policy", i_policy, "Truncation orders per index pattern or from the distinct case")
        ->check(CLI::IsMember({"pattern", "distinct"}))
        ->capture_default_str();
    integ->callback([&] {
        action = [&] {
            const SdeProblem problem = make_problem(i_problem);
            const Scheme scheme = parse_scheme(i_scheme);
            const double T = i_T > 0.0 ? i_T : problem.horizon;
            const int steps = steps_for(T, i_h);
            auto cache = make_cache();
            SchemeOptions sopts;
            sopts.policy = parse_policy(i_policy);
            sopts.constant = i_constant;
            sopts.cache = cache.get();
            const StepContext ctx(scheme, problem.noise_dim(), i_h, sopts);
            const int n = problem.state_dim();
            std::vector<double> mean(static_cast<std::size_t>(n), 0.0), m2(static_cast<std::size_t>(n), 0.0);
            double err_mean = 0.0, err_m2 = 0.0;
            for (std::uint64_t path = 0; path < i_paths; ++path) {
                Rng rng = stream_rng(i_seed, path);
                const auto res = integrate(problem, ctx, problem.x0, steps, rng);
                const double count = static_cast<double>(path + 1);
                for (int c = 0; c < n; ++c) {
                    const double x = res.final_state(c);
                    const double d = x - mean[static_cast<std::size_t>(c)];
                    mean[static_cast<std::size_t>(c)] += d / count;
                    m2[static_cast<std::size_t>(c)] += d * (x - mean[static_cast<std::size_t>(c)]);
                }
                if (problem.exact) {
                    const double e = (res.final_state - (*problem.exact)(problem.x0, T, res.w_T)).norm();
                    const double d = e - err_mean;
                    err_mean += d / count;
                    err_m2 += d * (e - err_mean);
                }
            }
            Report report("integrate", parse_format(g.format));
            echo_globals(report, g);
            report.config("scheme", to_string(scheme));
            report.config("problem", problem.name());
            report.config("h", i_h);
            report.config("T", T);
            report.config("steps", steps);
            report.config("paths", i_paths);
            report.config("seed", i_seed);
            report.config("policy", i_policy);
            report.config("constant", i_constant);
            const double np = static_cast<double>(i_paths);
            report.columns({"quantity", "mean", "std_error"});
            for (int c = 0; c < n; ++c) {
                const double var = i_paths > 1 ? m2[static_cast<std::size_t>(c)] / (np - 1.0) : 0.0;
                report.row({"x_T[" + std::to_string(c + 1) + "]", mean[static_cast<std::size_t>(c)], std::sqrt(var / np)});
            }
            if (problem.exact) {
                const double var = i_paths > 1 ? err_m2 / (np - 1.0) : 0.0;
                report.row({"|x_T - exact|", err_mean, std::sqrt(var / np)});
            }
            for (const auto& item : ctx.plan().items) report.note("q " + item.name, item.order);
            report.print(out);
        };
    });

    // order
    auto* order = app.add_subcommand("order", "Empirical strong order of a scheme");
    std::string o_scheme, o_problem = "gbm", o_steps, o_policy = "pattern";
    std::uint64_t o_paths = 20'000, o_seed = 1;
    order->add_option("--scheme", o_scheme, "euler, milstein, t15, t20 or t25")->required();
    order->add_option("--problem", o_problem, "gbm or bilinear")->capture_default_str();
    order->add_option("--steps", o_steps, "Comma list of at least three step sizes")->required();
    order->add_option("--paths", o_paths, "Number of paths")->capture_default_str();
    order->add_option("--seed", o_seed, "Random seed")->capture_default_str();
    order->add_option("--policy", o_policy, "Truncation orders per index pattern or from the distinct case")
        ->check(CLI::IsMember({"pattern", "distinct"}))
        ->capture_default_str();
    order->callback([&] {
        action = [&] {
            const SdeProblem problem = make_problem(o_problem);
            const Scheme scheme = parse_scheme(o_scheme);
            auto cache = make_cache();
            StrongOrderOptions opts;
            opts.paths = o_paths;
            opts.seed = o_seed;
            opts.scheme.policy = parse_policy(o_policy);
            opts.scheme.cache = cache.get();
            const auto res = estimate_strong_order(problem, scheme, parse_real_list(o_steps), opts);
            Report report("order", parse_format(g.format));
            echo_globals(report, g);
            report.config("scheme", to_string(scheme));
            report.config("problem", problem.name());
            report.config("steps", o_steps);
            report.config("paths", o_paths);
            report.config("seed", o_seed);
            report.config("policy", o_policy);
            report.config("reference", res.exact_reference ? "exact" : "fine-step");
            report.columns({"h", "mean_abs_error", "std_error"});
            for (const auto& p : res.points) report.row({p.h, p.mean_error, p.std_error});
            report.note("slope", res.slope);
            report.note("slope_std_error", res.slope_std_error);
            report.note("ci95", number(res.ci_low()) + " .. " + number(res.ci_high()));
            report.print(out);
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (action) action();
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

}  // namespace stochtaylor::cli
