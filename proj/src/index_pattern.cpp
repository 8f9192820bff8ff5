#include "stochtaylor/index_pattern.hpp"

#include "stochtaylor/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace stochtaylor {

IndexPattern::IndexPattern(int k, std::vector<std::vector<int>> blocks) : k_(k), blocks_(std::move(blocks)) {
    if (k < 1 || k > kMaxMultiplicity) throw DomainError("index pattern multiplicity out of range");
    std::vector<int> seen(static_cast<std::size_t>(k), 0);
    for (auto& b : blocks_) {
        if (b.empty()) throw DomainError("index pattern blocks must be nonempty");
        std::sort(b.begin(), b.end());
        for (int pos : b) {
            if (pos < 0 || pos >= k) throw DomainError("index pattern position out of range");
            if (seen[static_cast<std::size_t>(pos)]++) throw DomainError("index pattern blocks overlap");
        }
    }
    for (int s : seen)
        if (s == 0) throw DomainError("index pattern blocks do not cover every position");
    std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

IndexPattern IndexPattern::distinct(int k) {
    std::vector<std::vector<int>> blocks;
    for (int m = 0; m < k; ++m) blocks.push_back({m});
    return IndexPattern(k, std::move(blocks));
}

IndexPattern IndexPattern::all_equal(int k) {
    std::vector<int> all(static_cast<std::size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    return IndexPattern(k, {all});
}

IndexPattern IndexPattern::from_indices(std::span<const int> indices) {
    std::map<int, std::vector<int>> groups;
    for (std::size_t m = 0; m < indices.size(); ++m) {
        if (indices[m] < 1) throw DomainError("Wiener indices must be >= 1; time components are not supported");
        groups[indices[m]].push_back(static_cast<int>(m));
    }
    std::vector<std::vector<int>> blocks;
    for (auto& [_, b] : groups) blocks.push_back(std::move(b));
    return IndexPattern(static_cast<int>(indices.size()), std::move(blocks));
}

int IndexPattern::block_of(int position) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (std::find(blocks_[b].begin(), blocks_[b].end(), position) != blocks_[b].end()) return static_cast<int>(b);
    throw DomainError("position outside the pattern");
}

std::vector<int> IndexPattern::representative_indices() const {
    std::vector<int> out(static_cast<std::size_t>(k_));
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (int pos : blocks_[b]) out[static_cast<std::size_t>(pos)] = static_cast<int>(b) + 1;
    return out;
}

std::uint64_t IndexPattern::group_order() const {
    std::uint64_t n = 1;
    for (const auto& b : blocks_)
        for (std::uint64_t f = 2; f <= b.size(); ++f) n *= f;
    return n;
}

std::vector<MultiIndex> IndexPattern::permutations() const {
    MultiIndex identity{};
    for (int m = 0; m < k_; ++m) identity[static_cast<std::size_t>(m)] = m;
    std::vector<MultiIndex> out{identity};
    for (const auto& block : blocks_) {
        if (block.size() < 2) continue;
        std::vector<int> images = block;
        std::vector<MultiIndex> next;
        do {
            for (const auto& base : out) {
                MultiIndex perm = base;
                for (std::size_t q = 0; q < block.size(); ++q)
                    perm[static_cast<std::size_t>(block[q])] = images[q];
                next.push_back(perm);
            }
        } while (std::next_permutation(images.begin(), images.end()));
        out = std::move(next);
    }
    return out;
}

std::string IndexPattern::str() const {
    std::string out;
    for (const auto& b : blocks_) {
        out += '{';
        for (std::size_t q = 0; q < b.size(); ++q) {
            if (q) out += ',';
            out += std::to_string(b[q] + 1);
        }
        out += '}';
    }
    return out;
}

// ---------------------------------------------------------------------------------------

namespace {

struct CatalogEntry {
    const char* label;
    int k;
    // Non-singleton blocks as digit strings of 1-based positions, separated by '|'.
    const char* groups;
};

// clang-format off
constexpr CatalogEntry kCatalog[] = {
    {"2.1", 2, ""}, {"2.2", 2, "12"},
    {"3.1", 3, ""}, {"3.2", 3, "123"}, {"3.3.1", 3, "12"}, {"3.3.2", 3, "23"}, {"3.3.3", 3, "13"},
    {"4.1", 4, ""}, {"4.2", 4, "1234"},
    {"4.3.1", 4, "12"}, {"4.3.2", 4, "13"}, {"4.3.3", 4, "14"}, {"4.3.4", 4, "23"}, {"4.3.5", 4, "24"}, {"4.3.6", 4, "34"},
    {"4.4.1", 4, "123"}, {"4.4.2", 4, "234"}, {"4.4.3", 4, "124"}, {"4.4.4", 4, "134"},
    {"4.5.1", 4, "12|34"}, {"4.5.2", 4, "13|24"}, {"4.5.3", 4, "14|23"},
    {"5.1", 5, ""}, {"5.2", 5, "12345"},
    {"5.3.1", 5, "12"}, {"5.3.2", 5, "13"}, {"5.3.3", 5, "14"}, {"5.3.4", 5, "15"}, {"5.3.5", 5, "23"},
    {"5.3.6", 5, "24"}, {"5.3.7", 5, "25"}, {"5.3.8", 5, "34"}, {"5.3.9", 5, "35"}, {"5.3.10", 5, "45"},
    {"5.4.1", 5, "123"}, {"5.4.2", 5, "124"}, {"5.4.3", 5, "125"}, {"5.4.4", 5, "234"}, {"5.4.5", 5, "235"},
    {"5.4.6", 5, "245"}, {"5.4.7", 5, "345"}, {"5.4.8", 5, "135"}, {"5.4.9", 5, "134"}, {"5.4.10", 5, "145"},
    {"5.5.1", 5, "1234"}, {"5.5.2", 5, "1235"}, {"5.5.3", 5, "1245"}, {"5.5.4", 5, "1345"}, {"5.5.5", 5, "2345"},
    {"5.6.1", 5, "12|34"}, {"5.6.2", 5, "13|24"}, {"5.6.3", 5, "14|23"}, {"5.6.4", 5, "12|35"}, {"5.6.5", 5, "15|23"},
    {"5.6.6", 5, "25|13"}, {"5.6.7", 5, "25|14"}, {"5.6.8", 5, "12|45"}, {"5.6.9", 5, "24|15"}, {"5.6.10", 5, "14|35"},
    {"5.6.11", 5, "13|45"}, {"5.6.12", 5, "15|34"}, {"5.6.13", 5, "23|45"}, {"5.6.14", 5, "24|35"}, {"5.6.15", 5, "25|34"},
    {"5.7.1", 5, "123|45"}, {"5.7.2", 5, "124|35"}, {"5.7.3", 5, "125|34"}, {"5.7.4", 5, "234|15"}, {"5.7.5", 5, "235|14"},
    {"5.7.6", 5, "245|13"}, {"5.7.7", 5, "345|12"}, {"5.7.8", 5, "135|24"}, {"5.7.9", 5, "134|25"}, {"5.7.10", 5, "145|23"},
};
// clang-format on

IndexPattern pattern_of(const CatalogEntry& e) {
    std::vector<std::vector<int>> blocks;
    std::vector<bool> used(static_cast<std::size_t>(e.k), false);
    std::vector<int> current;
    for (const char* c = e.groups;; ++c) {
        if (*c == '|' || *c == '\0') {
            if (!current.empty()) blocks.push_back(current);
            current.clear();
            if (*c == '\0') break;
            continue;
        }
        const int pos = *c - '1';
        current.push_back(pos);
        used[static_cast<std::size_t>(pos)] = true;
    }
    for (int m = 0; m < e.k; ++m)
        if (!used[static_cast<std::size_t>(m)]) blocks.push_back({m});
    return IndexPattern(e.k, std::move(blocks));
}

}  // namespace

std::vector<IndexPattern> catalog_patterns(int k) {
    if (k == 1) return {IndexPattern::distinct(1)};
    std::vector<IndexPattern> out;
    for (const auto& e : kCatalog)
        if (e.k == k) out.push_back(pattern_of(e));
    if (out.empty()) throw DomainError("no pattern catalog for multiplicity " + std::to_string(k));
    return out;
}

std::string case_label(const IndexPattern& pattern) {
    for (const auto& e : kCatalog)
        if (e.k == pattern.k() && pattern_of(e) == pattern) return e.label;
    throw DomainError("pattern " + pattern.str() + " has no catalog label");
}

IndexPattern pattern_from_label(const std::string& label) {
    for (const auto& e : kCatalog)
        if (label == e.label) return pattern_of(e);
    throw DomainError("unknown case label '" + label + "'");
}

IndexPattern IndexPattern::parse(const std::string& text, int k) {
    if (text == "distinct") return distinct(k);
    if (text == "equal" || text == "all-equal") return all_equal(k);
    if (text.find(',') != std::string::npos) {
        std::vector<int> indices;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                indices.push_back(std::stoi(item, &used));
                if (used != item.size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw DomainError("cannot parse Wiener indices '" + text + "'");
            }
        }
        auto pattern = from_indices(indices);
        if (pattern.k() != k) throw DomainError("pattern '" + text + "' does not have multiplicity " + std::to_string(k));
        return pattern;
    }
    std::string label = text;
    if (!label.empty() && label.back() >= 'a' && label.back() <= 'd') {
        label.pop_back();
        if (!label.empty() && label.back() == '.') label.pop_back();
    }
    auto pattern = pattern_from_label(label);
    if (pattern.k() != k) throw DomainError("case '" + text + "' does not have multiplicity " + std::to_string(k));
    return pattern;
}

std::string profile_letter(const WeightProfile& profile) {
    const int k = profile.k();
    const int sum = profile.weight_sum();
    if (sum == 0) return "a";
    if (sum != 1 || k > 3) return "";
    for (int m = k - 1; m >= 0; --m) {
        if (profile.l[static_cast<std::size_t>(m)] == 1) return std::string(1, static_cast<char>('b' + (k - 1 - m)));
    }
    return "";
}

std::string full_case_label(const IndexPattern& pattern, const WeightProfile& profile) {
    std::string label = case_label(pattern);
    const auto letter = profile_letter(profile);
    if (!letter.empty() && pattern.k() <= 3) label += "." + letter;
    return label;
}

}  // namespace stochtaylor
