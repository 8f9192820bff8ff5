#pragma once

#include "stochtaylor/coeff_store.hpp"
#include "stochtaylor/random.hpp"

#include <Eigen/Dense>

#include <memory>
#include <utility>
#include <vector>

namespace stochtaylor {

/** Iterated integral I^{(i_1..i_k)}_{(l_1..l_k)} over a step of length h. Wiener indices are 1-based. */
struct IntegralSpec {
    WeightProfile profile;
    std::vector<int> wiener;
    double h = 1.0;

    IntegralSpec() = default;
    IntegralSpec(WeightProfile p, std::vector<int> i, double step);
    int k() const { return profile.k(); }
    int components() const;
};

/** Standard normal variables zeta_j^{(i)}, i = 1..m, j = 0..pmax. */
class GaussianPanel {
public:
    GaussianPanel(int m, int pmax);
    static GaussianPanel sample(int m, int pmax, Rng& rng);

    int components() const { return static_cast<int>(z_.rows()); }
    int pmax() const { return static_cast<int>(z_.cols()) - 1; }
    /** zeta_j^{(i)} with 1-based i. */
    double operator()(int i, int j) const { return z_(i - 1, j); }
    double& operator()(int i, int j) { return z_(i - 1, j); }
    Eigen::MatrixXd& matrix() { return z_; }
    const Eigen::MatrixXd& matrix() const { return z_; }

private:
    Eigen::MatrixXd z_;
};

/** r disjoint unordered pairs of 0-based positions plus the remaining singletons. */
struct PairPartition {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> singles;
};

/** Every way to choose r disjoint pairs from {0..k-1}; there are k!/(2^r r! (k-2r)!). */
std::vector<PairPartition> enumerate_pair_partitions(int k, int r);

/** Coefficients of one profile at cap p and step h, ready for repeated sampling. */
struct PreparedCoefficients {
    struct Term {
        MultiIndex j{};
        double c = 0.0;
    };
    WeightProfile profile;
    int p = 0;
    double h = 0.0;
    std::vector<Term> terms;

    PreparedCoefficients(const CoeffTensor& tensor, int p, double h);
};

/**
 * @brief Truncated expansion of one iterated integral in the Gaussian panel.
 *
 * ito() evaluates sum_j C_j [prod zeta + sum_r (-1)^r sum_{pair partitions} prod 1{i pair
 * equal} 1{j pair equal} prod singleton zeta]; stratonovich() is the plain product sum.
 */
class ItoSampler {
public:
    ItoSampler(std::shared_ptr<const PreparedCoefficients> coeffs, std::vector<int> wiener);

    double ito(const GaussianPanel& panel) const;
    double stratonovich(const GaussianPanel& panel) const;
    int p() const { return coeffs_->p; }

private:
    struct Correction {
        double sign;
        PairPartition partition;
    };
    void check_panel(const GaussianPanel& panel) const;

    std::shared_ptr<const PreparedCoefficients> coeffs_;
    std::vector<int> wiener_;
    std::vector<Correction> corrections_;
};

double sample_ito(const IntegralSpec& spec, int p, const GaussianPanel& panel, TensorCache& cache = default_tensor_cache());
double sample_stratonovich(const IntegralSpec& spec, int p, const GaussianPanel& panel,
                           TensorCache& cache = default_tensor_cache());

}  // namespace stochtaylor
