#pragma once

#include "stochtaylor/coeff_engine.hpp"
#include "stochtaylor/coeff_store.hpp"
#include "stochtaylor/index_pattern.hpp"

#include <vector>

namespace stochtaylor {

/** Mean-square truncation error of one integral at cap p and step h. */
struct ErrorResult {
    double value = 0.0;
    /** value / h^{k + 2 sum l}; the quantity printed in error tables. */
    double normalized = 0.0;
    WeightProfile profile;
    IndexPattern pattern;
    int p = 0;
    double h = 0.0;
};

/**
 * Normalized errors E(p) / h^{k + 2 sum l} for every p = 0..pmax, from one pass over the
 * tensor. The error is I - sum_j C_j sum_{pi in G} C_{pi j}, with G the product of
 * symmetric groups acting on the equal-index blocks of the pattern.
 */
std::vector<double> normalized_error_curve(const CoeffTensor& tensor, const IndexPattern& pattern, int pmax);

/** Same rule evaluated in exact rational arithmetic (normalized by h^{k + 2 sum l}). */
Rational normalized_error_exact(const CoeffTensor& tensor, const IndexPattern& pattern, int p);

ErrorResult exact_error(const CoeffTensor& tensor, const IndexPattern& pattern, int p, double h);
ErrorResult exact_error(const WeightProfile& profile, const IndexPattern& pattern, int p, double h,
                        TensorCache& cache = default_tensor_cache());

/** Normalized k! (I - sum C^2) for p = 0..pmax. */
std::vector<double> normalized_kfact_curve(const CoeffTensor& tensor, int pmax);

/** k! (I - sum_{j in {0..p}^k} C_j^2), an upper bound on the error of every pattern. */
double error_bound_kfact(const WeightProfile& profile, int p, double h, TensorCache& cache = default_tensor_cache());

}  // namespace stochtaylor
