#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace bratteli {

/// A finite simple graph with a two-coloring by distance parity from a
/// marked start vertex.  color[v] is dist(start, v) mod 2.
struct MarkedGraph {
    std::size_t n = 0;
    Matrix<Int> adjacency{0, 0};
    std::vector<int> color;
    std::vector<std::size_t> distance;
    std::size_t start = 0;
};

enum class DynkinType { A, D, E };

inline char dynkin_letter(DynkinType t) {
    switch (t) {
        case DynkinType::A: return 'A';
        case DynkinType::D: return 'D';
        default: return 'E';
    }
}

namespace detail {

inline void bfs_color(MarkedGraph& g) {
    g.color.assign(g.n, -1);
    g.distance.assign(g.n, static_cast<std::size_t>(-1));
    std::deque<std::size_t> queue{g.start};
    g.color[g.start] = 0;
    g.distance[g.start] = 0;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w = 0; w < g.n; ++w) {
            if (g.adjacency(v, w) == 0 || g.color[w] != -1) continue;
            g.color[w] = (g.color[v] + 1) % 2;
            g.distance[w] = g.distance[v] + 1;
            queue.push_back(w);
        }
    }
}

}  // namespace detail

/// The simply laced Dynkin diagram of the given type and rank, with vertices
/// numbered as follows:
///   A_n: a path 0 - 1 - ... - (n-1).
///   D_n: a path 0 - 1 - ... - (n-3) with both leaves n-2 and n-1 attached
///        to vertex n-3 (the fork sits at the far end of the path).
///   E_n: a path 0 - 1 - ... - (n-2) with the extra vertex n-1 attached to
///        vertex 2 of the path.
/// The start vertex defaults to 0 (an extremal vertex of the path).
inline MarkedGraph dynkin(DynkinType type, std::size_t rank,
                          std::optional<std::size_t> start = std::nullopt) {
    switch (type) {
        case DynkinType::A:
            if (rank < 2) throw Error(Errc::BadRank, "type A requires rank >= 2");
            break;
        case DynkinType::D:
            if (rank < 4) throw Error(Errc::BadRank, "type D requires rank >= 4");
            break;
        case DynkinType::E:
            if (rank < 6 || rank > 8) throw Error(Errc::BadRank, "type E requires rank in {6,7,8}");
            break;
    }
    MarkedGraph g;
    g.n = rank;
    g.adjacency = Matrix<Int>(rank, rank, Int(0));
    auto join = [&](std::size_t a, std::size_t b) {
        g.adjacency(a, b) = 1;
        g.adjacency(b, a) = 1;
    };
    switch (type) {
        case DynkinType::A:
            for (std::size_t v = 0; v + 1 < rank; ++v) join(v, v + 1);
            break;
        case DynkinType::D:
            for (std::size_t v = 0; v + 1 < rank - 2; ++v) join(v, v + 1);
            join(rank - 3, rank - 2);
            join(rank - 3, rank - 1);
            break;
        case DynkinType::E:
            for (std::size_t v = 0; v + 1 < rank - 1; ++v) join(v, v + 1);
            join(2, rank - 1);
            break;
    }
    g.start = start.value_or(0);
    if (g.start >= rank) throw Error(Errc::BadRank, "start vertex out of range");
    detail::bfs_color(g);
    return g;
}

/// The Bratteli diagram of the tower construction on a marked bipartite
/// graph: level n holds the vertices of color n mod 2 within distance n of
/// the start, each level-to-level matrix restricting the adjacency matrix to
/// the vertices active on either side.  The level sets stabilize once every
/// vertex is reached, after which the matrices alternate with period two;
/// the result is returned as a plain prefix diagram of the requested depth.
/// Also returns the vertex labels per level for callers that want to map
/// diagram vertices back to graph vertices.
struct TowerDiagram {
    BratteliDiagram diagram;
    std::vector<std::vector<std::size_t>> level_vertices;
};

inline TowerDiagram tower_diagram(const MarkedGraph& g, std::size_t depth) {
    if (depth < 1) throw Error(Errc::BadDepth, "tower depth must be at least 1");
    std::vector<std::vector<std::size_t>> levels(depth + 1);
    for (std::size_t n = 0; n <= depth; ++n)
        for (std::size_t v = 0; v < g.n; ++v)
            if (g.distance[v] != static_cast<std::size_t>(-1) &&
                g.color[v] == static_cast<int>(n % 2) && g.distance[v] <= n)
                levels[n].push_back(v);
    std::vector<std::size_t> sizes;
    sizes.reserve(depth + 1);
    for (const auto& lv : levels) sizes.push_back(lv.size());
    std::vector<Matrix<Int>> matrices;
    matrices.reserve(depth);
    for (std::size_t n = 0; n < depth; ++n) {
        Matrix<Int> m(levels[n + 1].size(), levels[n].size(), Int(0));
        for (std::size_t j = 0; j < levels[n + 1].size(); ++j)
            for (std::size_t i = 0; i < levels[n].size(); ++i)
                m(j, i) = g.adjacency(levels[n + 1][j], levels[n][i]);
        matrices.push_back(std::move(m));
    }
    TowerDiagram out{BratteliDiagram::validate(sizes, matrices, false), std::move(levels)};
    return out;
}

/// Graph norm (largest singular value of the bipartite half, equivalently
/// the spectral radius of the adjacency matrix for a connected bipartite
/// graph) and the squared norm ("index").
struct NormResult {
    double norm = 0.0;
    double index = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

inline NormResult graph_norm(const MarkedGraph& g, const Rat& tolerance = Rat(1, 10000000000LL)) {
    for (std::size_t v = 0; v < g.n; ++v)
        if (g.distance[v] == static_cast<std::size_t>(-1))
            throw Error(Errc::Disconnected,
                        "vertex " + std::to_string(v) + " unreachable from the start vertex");
    SpectralBracket br = perron_bracket(g.adjacency, tolerance);
    NormResult out;
    out.lo = static_cast<double>(br.lo);
    out.hi = static_cast<double>(br.hi);
    out.norm = br.midpoint();
    out.index = out.norm * out.norm;
    return out;
}

}  // namespace bratteli
