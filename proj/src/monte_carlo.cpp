#include "stochtaylor/monte_carlo.hpp"

#include "stochtaylor/error_calculus.hpp"
#include "stochtaylor/errors.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace stochtaylor {

WienerPath WienerPath::sample(int m, int N, double h, Rng& rng) {
    if (m < 1 || N < 2 || !(h > 0.0)) throw DomainError("Wiener path needs m >= 1, N >= 2 and h > 0");
    WienerPath path;
    path.h = h;
    path.dW.resize(m, N);
    std::normal_distribution<double> normal;
    const double sd = std::sqrt(h / N);
    for (int l = 0; l < N; ++l)
        for (int i = 0; i < m; ++i) path.dW(i, l) = sd * normal(rng);
    return path;
}

namespace {

// Weight (t - tau)^l with t = 0, at the left end of [a, b] or averaged over it.
double weight_left(int l, double a) { return std::pow(-a, l); }

double weight_average(int l, double a, double b) {
    const double sign = l % 2 == 0 ? 1.0 : -1.0;
    return sign * (std::pow(b, l + 1) - std::pow(a, l + 1)) / ((l + 1) * (b - a));
}

const std::vector<PairPartition>& partitions_of(int n, int r) {
    static const auto table = [] {
        std::array<std::array<std::vector<PairPartition>, kMaxMultiplicity / 2 + 1>, kMaxMultiplicity + 1> t;
        for (int n = 0; n <= kMaxMultiplicity; ++n)
            for (int r = 0; 2 * r <= n; ++r) t[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)] = enumerate_pair_partitions(n, r);
        return t;
    }();
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
}

// Wick product of the increments x_0..x_{n-1} with covariance dt * 1{same component}.
double wick(const double* x, const int* comp, int n, double dt) {
    double total = 0.0;
    for (int r = 0; 2 * r <= n; ++r) {
        for (const auto& part : partitions_of(n, r)) {
            double term = 1.0;
            for (const auto& [a, b] : part.pairs) {
                if (comp[a] != comp[b]) {
                    term = 0.0;
                    break;
                }
                term *= -dt;
            }
            if (term == 0.0) continue;
            for (int s : part.singles) term *= x[s];
            total += term;
        }
    }
    return total;
}

Eigen::MatrixXd basis_table(int pmax, int N, double h, OracleRule rule) {
    Eigen::MatrixXd phi(N, pmax + 1);
    const double dt = h / N;
    for (int l = 0; l < N; ++l) {
        const double a = l * dt;
        const double b = l + 1 == N ? h : (l + 1) * dt;
        for (int j = 0; j <= pmax; ++j)
            phi(l, j) = rule == OracleRule::LeftPoint ? eval_phi(j, a, 0.0, h) : phi_cell_average(j, a, b, 0.0, h);
    }
    return phi;
}

}  // namespace

double discretization_oracle(const IntegralSpec& spec, const WienerPath& path, OracleRule rule) {
    const int k = spec.k();
    if (spec.components() > path.components()) throw DomainError("oracle: path lacks a Wiener component");
    if (path.cells() < 2) throw DomainError("oracle: need at least two grid cells");
    const int N = path.cells();
    const double dt = path.h / N;
    std::array<double, kMaxMultiplicity + 1> S{};
    S[0] = 1.0;
    std::array<int, kMaxMultiplicity> comp{};
    for (int m = 0; m < k; ++m) comp[static_cast<std::size_t>(m)] = spec.wiener[static_cast<std::size_t>(m)] - 1;

    std::array<double, kMaxMultiplicity> x{};
    std::array<double, kMaxMultiplicity> psi{};
    for (int c = 0; c < N; ++c) {
        const double a = c * dt;
        const double b = c + 1 == N ? path.h : (c + 1) * dt;
        for (int m = 0; m < k; ++m) {
            x[static_cast<std::size_t>(m)] = path.dW(comp[static_cast<std::size_t>(m)], c);
            const int l = spec.profile.l[static_cast<std::size_t>(m)];
            psi[static_cast<std::size_t>(m)] = rule == OracleRule::LeftPoint ? weight_left(l, a) : weight_average(l, a, b);
        }
        for (int m = k; m >= 1; --m) {
            if (rule == OracleRule::LeftPoint) {
                S[static_cast<std::size_t>(m)] += S[static_cast<std::size_t>(m - 1)] * psi[static_cast<std::size_t>(m - 1)] * x[static_cast<std::size_t>(m - 1)];
                continue;
            }
            // Chen's relation: prefix integral up to the cell times the cell's own iterated integral.
            double add = 0.0;
            double weights = 1.0;
            double factorial = 1.0;
            for (int s = m - 1; s >= 0; --s) {
                const int n = m - s;
                weights *= psi[static_cast<std::size_t>(s)];
                factorial *= n;
                if (S[static_cast<std::size_t>(s)] == 0.0) continue;
                add += S[static_cast<std::size_t>(s)] * weights * wick(&x[static_cast<std::size_t>(s)], &comp[static_cast<std::size_t>(s)], n, dt) / factorial;
            }
            S[static_cast<std::size_t>(m)] += add;
        }
    }
    return S[static_cast<std::size_t>(k)];
}

GaussianPanel panel_from_path(const WienerPath& path, int pmax, OracleRule rule) {
    const Eigen::MatrixXd phi = basis_table(pmax, path.cells(), path.h, rule);
    GaussianPanel panel(path.components(), pmax);
    panel.matrix() = path.dW * phi;
    return panel;
}

double MseResult::z_score() const {
    const double d = empirical - exact;
    if (std::abs(d) <= roundoff) return 0.0;
    if (std_error > 0.0) return d / std_error;
    return d == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), d);
}

bool MseResult::within(double sigmas) const {
    const double floor = 1e-12 * std::max(std::abs(exact), std::abs(empirical)) + roundoff + 1e-300;
    return std::abs(empirical - exact) <= sigmas * std_error + floor;
}

std::vector<MseResult> mse_experiment(const IntegralSpec& spec, const std::vector<int>& orders, const MseOptions& options,
                                      TensorCache& cache) {
    if (orders.empty()) throw DomainError("mse: no truncation orders given");
    if (options.paths < 2) throw DomainError("mse: need at least two paths");
    if (options.grid < 2) throw DomainError("mse: need a grid of at least two cells");
    int pmax = 0;
    for (int p : orders) {
        if (p < 0) throw DomainError("mse: truncation orders must be non-negative");
        pmax = std::max(pmax, p);
    }
    const int m = spec.components();
    const auto pattern = IndexPattern::from_indices(spec.wiener);
    const auto tensor = cache.get(spec.profile, pmax);

    std::vector<ItoSampler> samplers;
    std::vector<MseResult> results;
    for (int p : orders) {
        samplers.emplace_back(std::make_shared<const PreparedCoefficients>(*tensor, p, spec.h), spec.wiener);
        MseResult r;
        r.p = p;
        r.exact = exact_error(*tensor, pattern, p, spec.h).value;
        r.roundoff = 1e-24 * exact_norm(spec.profile).value.get_d() * std::pow(spec.h, spec.profile.norm_exponent());
        results.push_back(r);
    }

    const Eigen::MatrixXd phi = basis_table(pmax, options.grid, spec.h, options.rule);
    std::vector<double> mean(orders.size(), 0.0), m2(orders.size(), 0.0);
    GaussianPanel panel(m, pmax);
    for (std::uint64_t n = 0; n < options.paths; ++n) {
        Rng rng = stream_rng(options.seed, n);
        const WienerPath path = WienerPath::sample(m, options.grid, spec.h, rng);
        const double oracle = discretization_oracle(spec, path, options.rule);
        panel.matrix().noalias() = path.dW * phi;
        const double count = static_cast<double>(n + 1);
        for (std::size_t q = 0; q < orders.size(); ++q) {
            const double d = oracle - samplers[q].ito(panel);
            const double x = d * d;
            const double delta = x - mean[q];
            mean[q] += delta / count;
            m2[q] += delta * (x - mean[q]);
        }
    }
    const double n = static_cast<double>(options.paths);
    for (std::size_t q = 0; q < orders.size(); ++q) {
        results[q].empirical = mean[q];
        results[q].std_error = std::sqrt(m2[q] / (n - 1.0) / n);
    }
    return results;
}

}  // namespace stochtaylor
