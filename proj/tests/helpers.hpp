#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <string>
#include <vector>

#include <bratteli/bratteli.hpp>

#include <catch2/catch_amalgamated.hpp>

namespace testhelp {

/// Catch2 matcher: the thrown bratteli::Error carries the expected code.
struct HasErrc : Catch::Matchers::MatcherGenericBase {
    bratteli::Errc expected;
    explicit HasErrc(bratteli::Errc c) : expected(c) {}
    bool match(const bratteli::Error& e) const { return e.code() == expected; }
    std::string describe() const override {
        return std::string("has error code ") + bratteli::errc_name(expected);
    }
};

#define REQUIRE_ERRC(expr, errc) \
    REQUIRE_THROWS_MATCHES(expr, bratteli::Error, testhelp::HasErrc(errc))

using bratteli::BratteliDiagram;
using bratteli::DiagramDocument;
using bratteli::Edge;
using bratteli::Int;
using bratteli::Matrix;

inline std::size_t pick(std::mt19937& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random valid diagram: up to max_levels levels, level sizes up to max_size,
/// entries up to max_entry, zero rows repaired by one forced edge.
inline BratteliDiagram random_diagram(std::mt19937& rng, std::size_t max_levels = 6,
                                      std::size_t max_size = 5, std::size_t max_entry = 4,
                                      bool allow_stationary = false) {
    std::size_t levels = pick(rng, 2, max_levels);
    bool stationary = allow_stationary && pick(rng, 0, 1) == 1;
    std::vector<std::size_t> sizes(levels);
    sizes[0] = 1;
    for (std::size_t n = 1; n < levels; ++n) sizes[n] = pick(rng, 1, max_size);
    if (stationary && levels >= 2) sizes[levels - 1] = sizes[levels - 2];
    std::vector<Matrix<Int>> matrices;
    for (std::size_t n = 0; n + 1 < levels; ++n) {
        Matrix<Int> m(sizes[n + 1], sizes[n], Int(0));
        for (std::size_t j = 0; j < sizes[n + 1]; ++j) {
            bool nonzero = false;
            for (std::size_t i = 0; i < sizes[n]; ++i) {
                m(j, i) = Int(pick(rng, 0, max_entry));
                if (m(j, i) != 0) nonzero = true;
            }
            if (!nonzero) m(j, pick(rng, 0, sizes[n] - 1)) = Int(pick(rng, 1, max_entry));
        }
        matrices.push_back(std::move(m));
    }
    return BratteliDiagram::validate(sizes, matrices, stationary);
}

/// Random sorted kept-level list: always contains 0, at least two levels.
inline std::vector<std::size_t> random_keep(std::mt19937& rng, std::size_t levels) {
    std::vector<std::size_t> keep{0};
    for (std::size_t n = 1; n < levels; ++n)
        if (pick(rng, 0, 1) == 1) keep.push_back(n);
    if (keep.size() < 2) keep.push_back(pick(rng, 1, levels - 1));
    return keep;
}

/// Random kept-level list that retains the final level, so the telescoped
/// diagram spans the same window as the original.
inline std::vector<std::size_t> random_keep_full(std::mt19937& rng, std::size_t levels) {
    std::vector<std::size_t> keep{0};
    for (std::size_t n = 1; n + 1 < levels; ++n)
        if (pick(rng, 0, 1) == 1) keep.push_back(n);
    keep.push_back(levels - 1);
    return keep;
}

/// Random document: diagram plus shuffled (possibly non-default) edge orders
/// on a few vertices and a few comments.
inline DiagramDocument random_document(std::mt19937& rng) {
    BratteliDiagram d = random_diagram(rng, 5, 4, 3, true);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> orders;
    for (std::size_t level = 1; level < d.prefix_levels(); ++level)
        for (std::size_t v = 0; v < d.level_size(level); ++v)
            if (pick(rng, 0, 2) == 0) {
                auto ord = bratteli::OrderedBratteliDiagram::default_order_of(d, level, v);
                std::shuffle(ord.begin(), ord.end(), rng);
                orders[{level, v}] = std::move(ord);
            }
    std::vector<std::string> comments;
    const char* words[] = {"alpha", "beta", "gamma", "delta", "tail", "window"};
    for (std::size_t c = pick(rng, 0, 2); c > 0; --c)
        comments.push_back(std::string(words[pick(rng, 0, 5)]) + " " +
                           std::to_string(pick(rng, 0, 99)));
    return DiagramDocument::make(std::move(d), std::move(orders), std::move(comments));
}

}  // namespace testhelp
