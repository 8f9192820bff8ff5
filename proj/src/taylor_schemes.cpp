#include "stochtaylor/taylor_schemes.hpp"

#include "stochtaylor/errors.hpp"
#include "stochtaylor/index_pattern.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace stochtaylor {

namespace {

/** Splits a word into its tokens; returns false on anything malformed. */
bool tokenize(const std::string& word, std::vector<std::string>& tokens) {
    tokens.clear();
    std::size_t pos = 0;
    while (pos < word.size()) {
        if (word.compare(pos, 2, "G0") == 0) {
            tokens.emplace_back("G0");
            pos += 2;
        } else if (word[pos] == 'L') {
            tokens.emplace_back("L");
            ++pos;
        } else if ((word[pos] == 'a' || word[pos] == 'B') && pos + 1 == word.size()) {
            tokens.emplace_back(1, word[pos]);
            ++pos;
        } else {
            return false;
        }
    }
    return !tokens.empty() && (tokens.back() == "a" || tokens.back() == "B");
}

}  // namespace

bool is_valid_word(const std::string& word) {
    std::vector<std::string> tokens;
    return tokenize(word, tokens);
}

int word_arity(const std::string& word) {
    std::vector<std::string> tokens;
    if (!tokenize(word, tokens)) throw DomainError("malformed operator word '" + word + "'");
    int arity = static_cast<int>(std::count(tokens.begin(), tokens.end(), "G0"));
    return tokens.back() == "B" ? arity + 1 : arity;
}

SdeProblem::SdeProblem(std::string name, int n, int m) : name_(std::move(name)), n_(n), m_(m) {
    if (n < 1 || m < 1) throw DomainError("SDE problem needs n >= 1 and m >= 1");
    x0 = Eigen::VectorXd::Zero(n);
}

void SdeProblem::define(const std::string& word, WordFn fn) {
    if (!is_valid_word(word)) throw DomainError("malformed operator word '" + word + "'");
    if (!fn) throw DomainError("empty coefficient function for '" + word + "'");
    words_[word] = std::move(fn);
}

std::vector<std::string> SdeProblem::words() const {
    std::vector<std::string> out;
    for (const auto& [w, fn] : words_) out.push_back(w);
    return out;
}

Eigen::VectorXd SdeProblem::eval(const std::string& word, const Eigen::VectorXd& x, double t,
                                 std::span<const int> indices) const {
    const auto it = words_.find(word);
    if (it == words_.end()) throw DomainError("problem '" + name_ + "' lacks operator word " + word);
    return it->second(x, t, indices);
}

Scheme parse_scheme(const std::string& text) {
    if (text == "euler") return Scheme::Euler;
    if (text == "milstein" || text == "1.0" || text == "t10") return Scheme::Milstein;
    if (text == "t15" || text == "1.5") return Scheme::T15;
    if (text == "t20" || text == "2.0") return Scheme::T20;
    if (text == "t25" || text == "2.5") return Scheme::T25;
    throw DomainError("unknown scheme '" + text + "' (expected euler, milstein, t15, t20 or t25)");
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
    case Scheme::Euler: return "euler";
    case Scheme::Milstein: return "milstein";
    case Scheme::T15: return "t15";
    case Scheme::T20: return "t20";
    case Scheme::T25: return "t25";
    }
    return "?";
}

std::optional<SchemeOrder> scheme_order(Scheme scheme) {
    switch (scheme) {
    case Scheme::Euler: return std::nullopt;
    case Scheme::Milstein: return SchemeOrder::Order10;
    case Scheme::T15: return SchemeOrder::Order15;
    case Scheme::T20: return SchemeOrder::Order20;
    case Scheme::T25: return SchemeOrder::Order25;
    }
    return std::nullopt;
}

bool operator==(const SchemeTerm::Part& a, const SchemeTerm::Part& b) {
    return a.factor == b.factor && a.h_power == b.h_power && a.profile == b.profile;
}

bool SchemeTerm::operator==(const SchemeTerm& other) const { return word == other.word && parts == other.parts; }

std::vector<SchemeTerm> scheme_terms(Scheme scheme) {
    using P = SchemeTerm::Part;
    std::vector<SchemeTerm> terms = {
        {"a", {P{1.0, 1, ""}}},
        {"B", {P{1.0, 0, "0"}}},
    };
    if (scheme == Scheme::Euler) return terms;
    terms.push_back({"G0B", {P{1.0, 0, "00"}}});
    if (scheme == Scheme::Milstein) return terms;

    terms.push_back({"G0a", {P{1.0, 1, "0"}, P{1.0, 0, "1"}}});
    terms.push_back({"LB", {P{-1.0, 0, "1"}}});
    terms.push_back({"G0G0B", {P{1.0, 0, "000"}}});
    terms.push_back({"La", {P{0.5, 2, ""}}});
    if (scheme == Scheme::T15) return terms;

    terms.push_back({"G0LB", {P{1.0, 0, "10"}, P{-1.0, 0, "01"}}});
    terms.push_back({"LG0B", {P{-1.0, 0, "10"}}});
    terms.push_back({"G0G0a", {P{1.0, 0, "01"}, P{1.0, 1, "00"}}});
    terms.push_back({"G0G0G0B", {P{1.0, 0, "0000"}}});
    if (scheme == Scheme::T20) return terms;

    terms.push_back({"G0La", {P{0.5, 0, "2"}, P{1.0, 1, "1"}, P{0.5, 2, "0"}}});
    terms.push_back({"LLB", {P{0.5, 0, "2"}}});
    terms.push_back({"LG0a", {P{-1.0, 0, "2"}, P{-1.0, 1, "1"}}});
    terms.push_back({"G0LG0B", {P{1.0, 0, "100"}, P{-1.0, 0, "010"}}});
    terms.push_back({"G0G0LB", {P{1.0, 0, "010"}, P{-1.0, 0, "001"}}});
    terms.push_back({"G0G0G0a", {P{1.0, 1, "000"}, P{1.0, 0, "001"}}});
    terms.push_back({"LG0G0B", {P{-1.0, 0, "100"}}});
    terms.push_back({"G0G0G0G0B", {P{1.0, 0, "00000"}}});
    terms.push_back({"LLa", {P{1.0 / 6.0, 3, ""}}});
    return terms;
}

std::vector<std::string> required_words(Scheme scheme) {
    std::vector<std::string> out;
    for (const auto& term : scheme_terms(scheme)) out.push_back(term.word);
    return out;
}

std::vector<std::string> required_profiles(Scheme scheme) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    for (const auto& term : scheme_terms(scheme))
        for (const auto& part : term.parts)
            if (!part.profile.empty() && seen.insert(part.profile).second) out.push_back(part.profile);
    return out;
}

namespace {

std::size_t tuple_count(int m, int k) {
    std::size_t n = 1;
    for (int s = 0; s < k; ++s) n *= static_cast<std::size_t>(m);
    return n;
}

/** Advances a 1-based index tuple with position 0 fastest; false after the last tuple. */
bool next_tuple(std::vector<int>& idx, int m) {
    for (auto& v : idx) {
        if (v < m) {
            ++v;
            return true;
        }
        v = 1;
    }
    return false;
}

}  // namespace

void StepIntegrals::resize(const std::string& profile, int k) {
    values_[profile].assign(tuple_count(m_, k), 0.0);
}

std::size_t StepIntegrals::offset(std::span<const int> indices) const {
    std::size_t off = 0;
    std::size_t stride = 1;
    for (int v : indices) {
        if (v < 1 || v > m_) throw DomainError("Wiener index " + std::to_string(v) + " outside 1.." + std::to_string(m_));
        off += static_cast<std::size_t>(v - 1) * stride;
        stride *= static_cast<std::size_t>(m_);
    }
    return off;
}

double StepIntegrals::get(const std::string& profile, std::span<const int> indices) const {
    const auto it = values_.find(profile);
    if (it == values_.end()) throw DomainError("step lacks the integral I_(" + profile + ")");
    const std::size_t off = offset(indices);
    if (off >= it->second.size()) throw DomainError("index tuple does not match I_(" + profile + ")");
    return it->second[off];
}

double& StepIntegrals::at(const std::string& profile, std::span<const int> indices) {
    const auto it = values_.find(profile);
    if (it == values_.end()) throw DomainError("step lacks the integral I_(" + profile + ")");
    const std::size_t off = offset(indices);
    if (off >= it->second.size()) throw DomainError("index tuple does not match I_(" + profile + ")");
    return it->second[off];
}

StepContext::StepContext(Scheme scheme, int m, double h, const SchemeOptions& options)
    : scheme_(scheme), m_(m), h_(h) {
    if (m < 1) throw DomainError("step context needs m >= 1");
    if (!(h > 0.0)) throw DomainError("step context needs h > 0");
    TensorCache& cache = options.cache ? *options.cache : default_tensor_cache();
    const auto order = scheme_order(scheme);
    plan_.h = h;
    plan_.constant = options.constant;
    if (order) {
        plan_.scheme = *order;
        if (options.policy == PlanPolicy::Distinct) plan_ = scheme_plan(*order, h, options.constant, cache);
    }

    std::map<std::pair<std::string, int>, std::shared_ptr<const PreparedCoefficients>> prepared;
    for (const auto& name : required_profiles(scheme)) {
        const WeightProfile profile = WeightProfile::parse(name);
        const int k = profile.k();
        Slot slot;
        slot.profile = name;
        slot.k = k;
        std::map<std::string, int> pattern_orders;
        std::vector<int> idx(static_cast<std::size_t>(k), 1);
        do {
            int p = 0;
            if (k == 1) {
                p = profile.l[0];
            } else if (options.policy == PlanPolicy::Distinct) {
                p = plan_.order_for(profile);
            } else {
                const IndexPattern pattern = IndexPattern::from_indices(idx);
                const auto key = pattern.str();
                auto it = pattern_orders.find(key);
                if (it == pattern_orders.end()) {
                    const Condition cond{3 + static_cast<int>(*order), options.constant, false};
                    it = pattern_orders.emplace(key, minimal_order(profile, pattern, cond, h, cache)).first;
                }
                p = it->second;
            }
            auto& coeffs = prepared[{name, p}];
            if (!coeffs) coeffs = std::make_shared<const PreparedCoefficients>(*cache.get(profile, p), p, h);
            slot.orders.push_back(p);
            slot.samplers.emplace_back(coeffs, idx);
            pmax_ = std::max(pmax_, p);
        } while (next_tuple(idx, m));

        if (k > 1 && options.policy == PlanPolicy::PerPattern) {
            PlanItem item;
            item.name = "I(" + name + ")";
            item.profile = profile;
            item.condition = Condition{3 + static_cast<int>(*order), options.constant, false};
            item.order = *std::max_element(slot.orders.begin(), slot.orders.end());
            plan_.items.push_back(std::move(item));
        }
        slots_.push_back(std::move(slot));
    }
}

int StepContext::order(const std::string& profile, std::span<const int> indices) const {
    for (const auto& slot : slots_) {
        if (slot.profile != profile) continue;
        if (static_cast<int>(indices.size()) != slot.k) throw DomainError("index tuple does not match I_(" + profile + ")");
        std::size_t off = 0;
        std::size_t stride = 1;
        for (int v : indices) {
            if (v < 1 || v > m_) throw DomainError("Wiener index outside 1.." + std::to_string(m_));
            off += static_cast<std::size_t>(v - 1) * stride;
            stride *= static_cast<std::size_t>(m_);
        }
        return slot.orders[off];
    }
    throw DomainError("scheme " + to_string(scheme_) + " does not use I_(" + profile + ")");
}

StepIntegrals StepContext::evaluate(const GaussianPanel& panel) const {
    if (panel.components() != m_ || panel.pmax() < pmax_) throw DomainError("panel does not match the step context");
    StepIntegrals out(m_, h_);
    for (const auto& slot : slots_) {
        out.resize(slot.profile, slot.k);
        std::vector<int> idx(static_cast<std::size_t>(slot.k), 1);
        std::size_t n = 0;
        do {
            out.at(slot.profile, idx) = slot.samplers[n++].ito(panel);
        } while (next_tuple(idx, m_));
    }
    return out;
}

StepIntegrals StepContext::draw(Rng& rng) const { return evaluate(GaussianPanel::sample(m_, pmax_, rng)); }

void check_registry(const SdeProblem& problem, Scheme scheme) {
    for (const auto& word : required_words(scheme))
        if (!problem.has(word))
            throw DomainError("problem '" + problem.name() + "' lacks operator word " + word + " required by " +
                              to_string(scheme));
}

Eigen::VectorXd step(const SdeProblem& problem, Scheme scheme, const Eigen::VectorXd& x, double t,
                     const StepIntegrals& integrals) {
    const int m = problem.noise_dim();
    if (integrals.noise_dim() != m) throw DomainError("integrals drawn for a different noise dimension");
    if (x.size() != problem.state_dim()) throw DomainError("state has the wrong dimension");
    const double h = integrals.h();
    Eigen::VectorXd y = x;
    for (const auto& term : scheme_terms(scheme)) {
        const int arity = word_arity(term.word);
        std::vector<int> idx(static_cast<std::size_t>(arity), 1);
        do {
            double weight = 0.0;
            for (const auto& part : term.parts) {
                const double value = part.profile.empty() ? 1.0 : integrals.get(part.profile, idx);
                weight += part.factor * std::pow(h, part.h_power) * value;
            }
            if (weight != 0.0) y += weight * problem.eval(term.word, x, t, idx);
        } while (next_tuple(idx, m));
    }
    return y;
}

namespace {

/** Runs the scheme; when increments is given, column p drives I_(0) of step p. */
PathResult run(const SdeProblem& problem, const StepContext& ctx, const Eigen::VectorXd& x0, int steps, Rng& rng,
               const Eigen::MatrixXd* increments, bool keep_states) {
    check_registry(problem, ctx.scheme());
    if (ctx.noise_dim() != problem.noise_dim()) throw DomainError("step context built for a different noise dimension");
    if (x0.size() != problem.state_dim()) throw DomainError("initial state has the wrong dimension");
    if (steps < 1) throw DomainError("integrate needs at least one step");
    const int m = problem.noise_dim();
    const double h = ctx.h();
    PathResult out;
    out.final_state = x0;
    out.w_T = Eigen::VectorXd::Zero(m);
    if (keep_states) out.states.push_back(x0);
    const double root_h = std::sqrt(h);
    for (int p = 0; p < steps; ++p) {
        GaussianPanel panel = GaussianPanel::sample(m, ctx.panel_order(), rng);
        if (increments)
            for (int i = 0; i < m; ++i) panel.matrix()(i, 0) = (*increments)(i, p) / root_h;
        const StepIntegrals integrals = ctx.evaluate(panel);
        for (int i = 1; i <= m; ++i) {
            const int idx[1] = {i};
            out.w_T(i - 1) += integrals.get("0", idx);
        }
        out.final_state = step(problem, ctx.scheme(), out.final_state, p * h, integrals);
        if (keep_states) out.states.push_back(out.final_state);
    }
    return out;
}

}  // namespace

PathResult integrate(const SdeProblem& problem, const StepContext& ctx, const Eigen::VectorXd& x0, int steps, Rng& rng,
                     bool keep_states) {
    return run(problem, ctx, x0, steps, rng, nullptr, keep_states);
}

int steps_for(double T, double h) {
    if (!(T > 0.0) || !(h > 0.0)) throw DomainError("horizon and step must be positive");
    const double ratio = T / h;
    const long long n = std::llround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio)
        throw DomainError("step " + std::to_string(h) + " does not divide the horizon " + std::to_string(T));
    return static_cast<int>(n);
}

StrongOrderResult estimate_strong_order(const SdeProblem& problem, Scheme scheme, const std::vector<double>& steps,
                                        const StrongOrderOptions& options) {
    if (steps.size() < 3) throw DomainError("strong order regression is ill-conditioned with fewer than 3 step sizes");
    if (options.paths < 2) throw DomainError("strong order estimation needs at least two paths");
    check_registry(problem, scheme);
    const double T = problem.horizon;
    const int m = problem.noise_dim();

    StrongOrderResult result;
    result.scheme = scheme;
    result.exact_reference = problem.exact.has_value();

    std::vector<StepContext> contexts;
    std::vector<int> counts;
    for (double h : steps) {
        contexts.emplace_back(scheme, m, h, options.scheme);
        counts.push_back(steps_for(T, h));
    }

    std::optional<StepContext> fine;
    int fine_steps = 0;
    if (!result.exact_reference) {
        if (options.reference_refinement < 1) throw DomainError("reference refinement must be >= 1");
        const double h_fine = *std::min_element(steps.begin(), steps.end()) / options.reference_refinement;
        fine.emplace(scheme, m, h_fine, options.scheme);
        fine_steps = steps_for(T, h_fine);
        for (int n : counts)
            if (fine_steps % n != 0) throw DomainError("every step must be a multiple of the reference step");
    }

    std::vector<double> mean(steps.size(), 0.0), m2(steps.size(), 0.0);
    for (std::uint64_t path = 0; path < options.paths; ++path) {
        Rng rng = stream_rng(options.seed, path);
        Eigen::VectorXd reference;
        Eigen::MatrixXd fine_dw;
        if (fine) {
            std::normal_distribution<double> normal;
            fine_dw.resize(m, fine_steps);
            const double sd = std::sqrt(fine->h());
            for (int p = 0; p < fine_steps; ++p)
                for (int i = 0; i < m; ++i) fine_dw(i, p) = sd * normal(rng);
            reference = run(problem, *fine, problem.x0, fine_steps, rng, &fine_dw, false).final_state;
        }
        const double count = static_cast<double>(path + 1);
        for (std::size_t s = 0; s < steps.size(); ++s) {
            PathResult coarse;
            if (fine) {
                const int block = fine_steps / counts[s];
                Eigen::MatrixXd dw(m, counts[s]);
                for (int p = 0; p < counts[s]; ++p) dw.col(p) = fine_dw.middleCols(p * block, block).rowwise().sum();
                coarse = run(problem, contexts[s], problem.x0, counts[s], rng, &dw, false);
            } else {
                coarse = run(problem, contexts[s], problem.x0, counts[s], rng, nullptr, false);
                reference = (*problem.exact)(problem.x0, T, coarse.w_T);
            }
            const double err = (coarse.final_state - reference).norm();
            const double delta = err - mean[s];
            mean[s] += delta / count;
            m2[s] += delta * (err - mean[s]);
        }
    }

    const double n = static_cast<double>(options.paths);
    double xbar = 0.0, ybar = 0.0;
    for (std::size_t s = 0; s < steps.size(); ++s) {
        StrongOrderPoint point{steps[s], mean[s], std::sqrt(m2[s] / (n - 1.0) / n)};
        if (!(point.mean_error > 0.0)) throw DomainError("zero strong error at h = " + std::to_string(steps[s]));
        result.points.push_back(point);
        xbar += std::log(point.h);
        ybar += std::log(point.mean_error);
    }
    xbar /= static_cast<double>(steps.size());
    ybar /= static_cast<double>(steps.size());
    double sxx = 0.0, sxy = 0.0, var = 0.0;
    for (const auto& point : result.points) {
        const double dx = std::log(point.h) - xbar;
        const double rel = point.std_error / point.mean_error;
        sxx += dx * dx;
        sxy += dx * (std::log(point.mean_error) - ybar);
        var += dx * dx * rel * rel;
    }
    if (!(sxx > 0.0)) throw DomainError("strong order regression needs distinct step sizes");
    result.slope = sxy / sxx;
    result.slope_std_error = std::sqrt(var) / sxx;
    result.intercept = ybar - result.slope * xbar;
    return result;
}

}  // namespace stochtaylor
