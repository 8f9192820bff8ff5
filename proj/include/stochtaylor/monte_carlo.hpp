#pragma once

#include "stochtaylor/integral_sampler.hpp"

#include <cstdint>
#include <vector>

namespace stochtaylor {

/** Wiener increments on a uniform grid of N cells over [0, h]; row i is component i + 1. */
struct WienerPath {
    double h = 1.0;
    Eigen::MatrixXd dW;

    int components() const { return static_cast<int>(dW.rows()); }
    int cells() const { return static_cast<int>(dW.cols()); }
    double dt() const { return h / cells(); }

    static WienerPath sample(int m, int N, double h, Rng& rng);
};

/**
 * LeftPoint: the plain left-point iterated Ito sum, with zeta_j = sum_l phi_j(tau_l) dW_l.
 * CellCorrected: the same sum plus the within-cell iterated integrals of the
 * piecewise-linear path (Ito corrected), with zeta_j built from cell averages of phi_j.
 * The correction removes the O(1/N) bias the left-point rule shows for repeated indices.
 */
enum class OracleRule { LeftPoint, CellCorrected };

/** Brute-force iterated sum of the integral along one path. */
double discretization_oracle(const IntegralSpec& spec, const WienerPath& path, OracleRule rule = OracleRule::CellCorrected);

/** Expansion variables zeta_j^{(i)}, j = 0..pmax, computed from the same increments. */
GaussianPanel panel_from_path(const WienerPath& path, int pmax, OracleRule rule = OracleRule::CellCorrected);

struct MseOptions {
    std::uint64_t paths = 200'000;
    int grid = 2048;
    std::uint64_t seed = 1;
    OracleRule rule = OracleRule::CellCorrected;
};

struct MseResult {
    int p = 0;
    double exact = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    /** Squared size of double rounding in the integral; smaller differences count as agreement. */
    double roundoff = 0.0;

    /** (empirical - exact) / std_error, or 0 when they agree to within roundoff. */
    double z_score() const;
    bool within(double sigmas) const;
};

/** Mean over paths of (oracle - truncated expansion)^2 against the exact error, one row per order. */
std::vector<MseResult> mse_experiment(const IntegralSpec& spec, const std::vector<int>& orders, const MseOptions& options,
                                      TensorCache& cache = default_tensor_cache());

}  // namespace stochtaylor
