#pragma once

#include "stochtaylor/taylor_schemes.hpp"

#include <string>
#include <vector>

namespace stochtaylor {

/**
 * dx = A x dt + sum_i B_i x dW_i. Every operator word the schemes use is registered: for
 * coefficients of the form M x, G_0^{(i)} sends M to M B_i and L sends M to M A.
 */
SdeProblem linear_problem(const std::string& name, const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& B);

/** Matrix M of the linear coefficient M x for a word and its 1-based indices. */
Eigen::MatrixXd linear_word_matrix(const std::string& word, std::span<const int> indices, const Eigen::MatrixXd& A,
                                   const std::vector<Eigen::MatrixXd>& B);

/** Scalar dx = lambda x dt + mu x dW with its exact solution x0 exp((lambda - mu^2/2) T + mu W_T). */
SdeProblem geometric_brownian_motion(double lambda = 2.0, double mu = 1.0, double x0 = 1.0, double T = 1.0);

/** Two-dimensional bilinear system driven by two non-commuting noise matrices. */
SdeProblem bilinear_2d();

std::vector<std::string> problem_names();
SdeProblem make_problem(const std::string& name);

}  // namespace stochtaylor
