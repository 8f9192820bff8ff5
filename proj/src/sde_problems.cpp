#include "stochtaylor/sde_problems.hpp"

#include "stochtaylor/errors.hpp"

#include <cmath>

namespace stochtaylor {

namespace {

const char* const kLinearWords[] = {
    "a",      "B",      "G0B",    "G0a",      "LB",        "G0G0B",     "La",  "G0LB", "LG0B", "G0G0a",
    "G0G0G0B", "G0La",  "LLB",    "LG0a",     "G0LG0B",    "G0G0LB",    "G0G0G0a", "LG0G0B", "G0G0G0G0B", "LLa",
};

}  // namespace

Eigen::MatrixXd linear_word_matrix(const std::string& word, std::span<const int> indices, const Eigen::MatrixXd& A,
                                   const std::vector<Eigen::MatrixXd>& B) {
    if (static_cast<int>(indices.size()) != word_arity(word))
        throw DomainError("word " + word + " takes " + std::to_string(word_arity(word)) + " indices");
    const int m = static_cast<int>(B.size());
    auto noise = [&](int i) -> const Eigen::MatrixXd& {
        if (i < 1 || i > m) throw DomainError("Wiener index " + std::to_string(i) + " outside 1.." + std::to_string(m));
        return B[static_cast<std::size_t>(i - 1)];
    };
    std::vector<bool> tokens;  // true for G0, false for L
    std::size_t pos = 0;
    while (pos + 1 < word.size()) {
        if (word[pos] == 'G') {
            tokens.push_back(true);
            pos += 2;
        } else {
            tokens.push_back(false);
            ++pos;
        }
    }
    const bool ends_in_b = word.back() == 'B';
    std::size_t next = indices.size();
    Eigen::MatrixXd M = ends_in_b ? noise(indices[--next]) : A;
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
        if (*it)
            M = M * noise(indices[--next]);
        else
            M = M * A;
    }
    return M;
}

SdeProblem linear_problem(const std::string& name, const Eigen::MatrixXd& A, const std::vector<Eigen::MatrixXd>& B) {
    const auto n = A.rows();
    if (A.cols() != n || B.empty()) throw DomainError("linear problem needs a square A and at least one B");
    for (const auto& b : B)
        if (b.rows() != n || b.cols() != n) throw DomainError("noise matrices must match A");
    SdeProblem problem(name, static_cast<int>(n), static_cast<int>(B.size()));
    for (const char* word : kLinearWords) {
        const std::string w = word;
        problem.define(w, [w, A, B](const Eigen::VectorXd& x, double, std::span<const int> idx) -> Eigen::VectorXd {
            return linear_word_matrix(w, idx, A, B) * x;
        });
    }
    problem.x0 = Eigen::VectorXd::Ones(n);
    return problem;
}

SdeProblem geometric_brownian_motion(double lambda, double mu, double x0, double T) {
    if (!(T > 0.0)) throw DomainError("GBM horizon must be positive");
    SdeProblem problem = linear_problem("gbm", Eigen::MatrixXd::Constant(1, 1, lambda), {Eigen::MatrixXd::Constant(1, 1, mu)});
    problem.x0 = Eigen::VectorXd::Constant(1, x0);
    problem.horizon = T;
    problem.exact = [lambda, mu](const Eigen::VectorXd& start, double t, const Eigen::VectorXd& w) -> Eigen::VectorXd {
        return start * std::exp((lambda - 0.5 * mu * mu) * t + mu * w(0));
    };
    return problem;
}

SdeProblem bilinear_2d() {
    Eigen::MatrixXd A(2, 2), B1(2, 2), B2(2, 2);
    A << -1.0, 0.5, 0.2, -0.8;
    B1 << 0.2, 0.1, 0.0, 0.3;
    B2 << 0.1, 0.0, 0.3, 0.2;
    SdeProblem problem = linear_problem("bilinear", A, {B1, B2});
    problem.x0 = Eigen::Vector2d(1.0, 0.5);
    problem.horizon = 1.0;
    return problem;
}

std::vector<std::string> problem_names() { return {"gbm", "bilinear"}; }

SdeProblem make_problem(const std::string& name) {
    if (name == "gbm") return geometric_brownian_motion();
    if (name == "bilinear") return bilinear_2d();
    throw DomainError("unknown problem '" + name + "' (expected gbm or bilinear)");
}

}  // namespace stochtaylor
