#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "quadratic.hpp"

namespace bratteli {

/// One edge of the multigraph, identified by its source vertex and its copy
/// index among the parallel edges sharing source and target (1-based).
struct Edge {
    std::size_t source = 0;
    std::size_t copy = 1;

    bool operator==(const Edge&) const = default;
    bool operator<(const Edge& o) const {
        return source != o.source ? source < o.source : copy < o.copy;
    }
};

/// A finite path from the root: edges[m] runs from level m to level m+1, so
/// its source sits at level m; end_vertex is the vertex reached at level
/// depth().  Each edge's target is the next edge's source (or end_vertex for
/// the last edge), so the adjacency chain is implicit in the representation.
struct PathWord {
    std::vector<Edge> edges;
    std::size_t end_vertex = 0;

    std::size_t depth() const { return edges.size(); }
    std::size_t vertex(std::size_t level) const {
        return level < edges.size() ? edges[level].source : end_vertex;
    }
    bool operator==(const PathWord&) const = default;
};

/// Checks a path against a diagram; throws InvalidPath with a reason.
inline void validate_path(const BratteliDiagram& d, const PathWord& p) {
    std::size_t depth = p.depth();
    if (!d.stationary() && depth > d.prefix_levels() - 1)
        throw Error(Errc::InvalidPath, "path deeper than the prefix");
    if (depth > 0 && p.edges[0].source != 0)
        throw Error(Errc::InvalidPath, "path does not start at the root");
    if (p.vertex(depth) >= d.level_size(depth))
        throw Error(Errc::InvalidPath, "end vertex out of range");
    for (std::size_t m = 0; m < depth; ++m) {
        std::size_t src = p.vertex(m), dst = p.vertex(m + 1);
        if (src >= d.level_size(m))
            throw Error(Errc::InvalidPath, "vertex out of range at level " + std::to_string(m));
        const Int& mult = d.step_matrix(m)(dst, src);
        if (p.edges[m].copy < 1 || Int(p.edges[m].copy) > mult)
            throw Error(Errc::InvalidPath, "no edge copy " + std::to_string(p.edges[m].copy) +
                                               " from vertex " + std::to_string(src) +
                                               " into vertex " + std::to_string(dst) +
                                               " at level " + std::to_string(m + 1));
    }
}

/// A diagram plus a total order on every vertex's incoming edge multiset.
/// Orders at tail levels repeat the last stored level's orders, matching the
/// repeating tail matrix.
class OrderedBratteliDiagram {
public:
    using OrderOverrides = std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>>;

    static OrderedBratteliDiagram with_default(BratteliDiagram d) {
        return with_orders(std::move(d), {});
    }

    static OrderedBratteliDiagram with_orders(BratteliDiagram d, const OrderOverrides& overrides) {
        OrderedBratteliDiagram od(std::move(d));
        for (const auto& [key, ord] : overrides) {
            auto [level, vertex] = key;
            if (level < 1 || level >= od.diagram_.prefix_levels())
                throw Error(Errc::LevelOutOfRange,
                            "order level " + std::to_string(level) + " outside prefix");
            if (vertex >= od.diagram_.level_size(level))
                throw Error(Errc::InvalidOrder, "order vertex " + std::to_string(vertex) +
                                                    " out of range at level " + std::to_string(level));
            std::vector<Edge> def = od.orders_[level - 1][vertex];
            std::vector<Edge> sorted = ord;
            std::sort(sorted.begin(), sorted.end());
            if (sorted != def)
                throw Error(Errc::InvalidOrder,
                            "order for vertex " + std::to_string(vertex) + " at level " +
                                std::to_string(level) +
                                " is not a permutation of the incoming edge multiset");
            od.orders_[level - 1][vertex] = ord;
        }
        return od;
    }

    const BratteliDiagram& diagram() const { return diagram_; }

    /// Ascending incoming-edge order of a vertex at a level >= 1.
    const std::vector<Edge>& order(std::size_t level, std::size_t vertex) const {
        if (level < 1) throw Error(Errc::LevelOutOfRange, "the root has no incoming edges");
        std::size_t L = diagram_.prefix_levels();
        if (level >= L) {
            if (!diagram_.stationary())
                throw Error(Errc::LevelOutOfRange,
                            "level " + std::to_string(level) + " outside prefix");
            level = L - 1;
        }
        return orders_[level - 1].at(vertex);
    }

    std::size_t rank_in(std::size_t level, std::size_t vertex, const Edge& e) const {
        const auto& ord = order(level, vertex);
        for (std::size_t i = 0; i < ord.size(); ++i)
            if (ord[i] == e) return i;
        throw Error(Errc::InvalidPath, "edge not in the incoming order");
    }

    /// The default lexicographic-by-(source, copy) order for one vertex.
    static std::vector<Edge> default_order_of(const BratteliDiagram& d, std::size_t level,
                                              std::size_t vertex) {
        const Matrix<Int>& m = d.step_matrix(level - 1);
        std::vector<Edge> ord;
        for (std::size_t i = 0; i < m.cols(); ++i)
            for (Int t = 1; t <= m(vertex, i); ++t)
                ord.push_back(Edge{i, static_cast<std::size_t>(t)});
        return ord;
    }

    /// True when the stored order of every vertex equals the default one.
    bool all_orders_default() const {
        for (std::size_t level = 1; level < diagram_.prefix_levels(); ++level)
            for (std::size_t v = 0; v < diagram_.level_size(level); ++v)
                if (orders_[level - 1][v] != default_order_of(diagram_, level, v)) return false;
        return true;
    }

private:
    explicit OrderedBratteliDiagram(BratteliDiagram d) : diagram_(std::move(d)) {
        std::size_t L = diagram_.prefix_levels();
        orders_.resize(L - 1);
        for (std::size_t level = 1; level < L; ++level) {
            orders_[level - 1].resize(diagram_.level_size(level));
            for (std::size_t v = 0; v < diagram_.level_size(level); ++v)
                orders_[level - 1][v] = default_order_of(diagram_, level, v);
        }
    }

    BratteliDiagram diagram_;
    std::vector<std::vector<std::vector<Edge>>> orders_;
};

/// Canonical lexicographic ordering of a diagram's edges.
inline OrderedBratteliDiagram default_order(BratteliDiagram d) {
    return OrderedBratteliDiagram::with_default(std::move(d));
}

namespace detail {

/// The all-minimal (or all-maximal) path into a fixed vertex, built by
/// following extreme incoming edges backwards to the root.
inline PathWord extreme_path_into(const OrderedBratteliDiagram& od, std::size_t level,
                                  std::size_t vertex, bool maximal) {
    PathWord p;
    p.edges.resize(level);
    p.end_vertex = vertex;
    std::size_t v = vertex;
    for (std::size_t m = level; m-- > 0;) {
        const auto& ord = od.order(m + 1, v);
        const Edge& e = maximal ? ord.back() : ord.front();
        p.edges[m] = e;
        v = e.source;
    }
    return p;
}

inline void check_depth(const BratteliDiagram& d, std::size_t depth) {
    if (!d.stationary() && depth > d.prefix_levels() - 1)
        throw Error(Errc::LevelOutOfRange, "depth " + std::to_string(depth) +
                                               " outside prefix of length " +
                                               std::to_string(d.prefix_levels()));
}

}  // namespace detail

/// The unique path all of whose edges are minimal in their incoming orders;
/// among the candidate endpoints at the requested depth, the path ending at
/// the smallest vertex index (0) is returned.
inline PathWord min_path(const OrderedBratteliDiagram& od, std::size_t depth) {
    detail::check_depth(od.diagram(), depth);
    return detail::extreme_path_into(od, depth, 0, false);
}

inline PathWord max_path(const OrderedBratteliDiagram& od, std::size_t depth) {
    detail::check_depth(od.diagram(), depth);
    return detail::extreme_path_into(od, depth, 0, true);
}

/// The adic successor: find the first position (root side first) whose edge
/// is not maximal in its incoming order, advance it to the next edge of that
/// order, and fill everything below with the minimal path into the new
/// source.  The all-maximal path wraps around to min_path(depth).
inline PathWord successor(const OrderedBratteliDiagram& od, const PathWord& path) {
    validate_path(od.diagram(), path);
    for (std::size_t m = 0; m < path.depth(); ++m) {
        std::size_t target = path.vertex(m + 1);
        const auto& ord = od.order(m + 1, target);
        std::size_t r = od.rank_in(m + 1, target, path.edges[m]);
        if (r + 1 < ord.size()) {
            const Edge& next = ord[r + 1];
            PathWord result = detail::extreme_path_into(od, m, next.source, false);
            result.edges.push_back(next);
            result.edges.insert(result.edges.end(), path.edges.begin() + m + 1, path.edges.end());
            result.end_vertex = path.end_vertex;
            return result;
        }
    }
    return min_path(od, path.depth());
}

/// [start, T(start), ..., T^steps(start)].
inline std::vector<PathWord> orbit(const OrderedBratteliDiagram& od, const PathWord& start,
                                   std::size_t steps) {
    validate_path(od.diagram(), start);
    std::vector<PathWord> out;
    out.reserve(steps + 1);
    out.push_back(start);
    for (std::size_t i = 0; i < steps; ++i) out.push_back(successor(od, out.back()));
    return out;
}

/// Proper-ordering verdict.  For a stationary tail the question is decided
/// by the functional graphs f_max and f_min sending each tail vertex to the
/// source of its maximal (resp. minimal) incoming edge: an infinite all-
/// maximal path is exactly a backward orbit of f_max, and those correspond
/// one-to-one with the elements of its unique terminal cycle, so the maximal
/// path is unique iff f_max has exactly one cycle and that cycle is a fixed
/// point (a longer cycle yields one distinct infinite path per phase).
/// Pure prefixes are reported UnknownAtBound at the examined depth.
struct ProperOrderingVerdict {
    enum class Kind { ProperlyOrdered, NotProperlyOrdered, UnknownAtBound };
    Kind kind = Kind::UnknownAtBound;
    std::vector<std::vector<std::size_t>> max_cycles;  // witness for NotProperlyOrdered
    std::vector<std::vector<std::size_t>> min_cycles;
    std::size_t depth = 0;  // examined depth for UnknownAtBound
};

namespace detail {

inline std::vector<std::vector<std::size_t>> functional_cycles(const std::vector<std::size_t>& f) {
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<int> state(f.size(), 0);  // 0 new, 1 on current walk, 2 settled
    for (std::size_t s = 0; s < f.size(); ++s) {
        if (state[s] != 0) continue;
        std::vector<std::size_t> walk;
        std::size_t v = s;
        while (state[v] == 0) {
            state[v] = 1;
            walk.push_back(v);
            v = f[v];
        }
        if (state[v] == 1) {
            // closed a new cycle: collect from first occurrence of v
            auto it = std::find(walk.begin(), walk.end(), v);
            cycles.emplace_back(it, walk.end());
        }
        for (std::size_t w : walk) state[w] = 2;
    }
    return cycles;
}

}  // namespace detail

inline ProperOrderingVerdict proper_ordering_check(const OrderedBratteliDiagram& od) {
    const BratteliDiagram& d = od.diagram();
    if (!d.stationary()) {
        ProperOrderingVerdict v;
        v.kind = ProperOrderingVerdict::Kind::UnknownAtBound;
        v.depth = d.prefix_levels() - 1;
        return v;
    }
    std::size_t tail_level = d.prefix_levels() - 1;
    std::size_t k = d.level_size(tail_level);
    std::vector<std::size_t> f_max(k), f_min(k);
    for (std::size_t v = 0; v < k; ++v) {
        f_max[v] = od.order(tail_level, v).back().source;
        f_min[v] = od.order(tail_level, v).front().source;
    }
    ProperOrderingVerdict verdict;
    verdict.max_cycles = detail::functional_cycles(f_max);
    verdict.min_cycles = detail::functional_cycles(f_min);
    bool max_ok = verdict.max_cycles.size() == 1 && verdict.max_cycles[0].size() == 1;
    bool min_ok = verdict.min_cycles.size() == 1 && verdict.min_cycles[0].size() == 1;
    verdict.kind = (max_ok && min_ok) ? ProperOrderingVerdict::Kind::ProperlyOrdered
                                      : ProperOrderingVerdict::Kind::NotProperlyOrdered;
    return verdict;
}

/// Measure of a finite-path cylinder under the unique invariant measure of a
/// primitive stationary diagram, exact whenever the Perron value lives in a
/// field of degree at most 2.
struct CylinderMeasure {
    std::optional<ExactScalar> exact;  // present when computed exactly
    double value = 0.0;
    double tolerance = 0.0;  // 0 for exact results; documented bound otherwise
};

namespace detail {

template <typename F>
std::vector<F> perron_vector_exact(const Matrix<Int>& a_transpose, const F& lambda, const F& one) {
    std::size_t k = a_transpose.rows();
    std::vector<std::vector<F>> m(k, std::vector<F>(k, one - one));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            F entry = one;
            if constexpr (std::is_same_v<F, Rat>)
                entry = Rat(a_transpose(i, j));
            else
                entry = Quad::from_rat(Rat(a_transpose(i, j)), lambda.radicand());
            if (i == j) entry = entry - lambda;
            m[i][j] = entry;
        }
    std::vector<F> x = kernel_vector(std::move(m), one);
    if (x.empty())
        throw Error(Errc::ConvergenceFailure, "exact Perron eigenvector solve failed");
    // normalize by the first nonzero entry, then demand strict positivity
    auto sign_of = [](const F& v) -> int {
        if constexpr (std::is_same_v<F, Rat>)
            return v == 0 ? 0 : (v > 0 ? 1 : -1);
        else
            return v.sign();
    };
    std::size_t first = 0;
    while (first < k && sign_of(x[first]) == 0) ++first;
    if (first == k) throw Error(Errc::ConvergenceFailure, "zero Perron eigenvector");
    F inv = one / x[first];
    for (auto& v : x) v = v * inv;
    for (const auto& v : x)
        if (sign_of(v) <= 0)
            throw Error(Errc::ConvergenceFailure, "Perron eigenvector not positive");
    return x;
}

template <typename F>
F pow_scalar(F base, std::size_t e, const F& one) {
    F acc = one;
    while (e) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

template <typename F>
CylinderMeasure measure_from_field(const Matrix<Int>& tail, const std::vector<Int>& unit,
                                   std::size_t steps, std::size_t vertex, const F& lambda,
                                   const F& one) {
    std::vector<F> x = perron_vector_exact(tail.transpose(), lambda, one);
    F denom = one - one;
    for (std::size_t i = 0; i < unit.size(); ++i) {
        F u = one;
        if constexpr (std::is_same_v<F, Rat>)
            u = Rat(unit[i]);
        else
            u = Quad::from_rat(Rat(unit[i]), lambda.radicand());
        denom = denom + u * x[i];
    }
    F mu = x[vertex] / (pow_scalar(lambda, steps, one) * denom);
    CylinderMeasure out;
    out.exact = ExactScalar(mu);
    out.value = exact_to_double(ExactScalar(mu));
    out.tolerance = 0.0;
    return out;
}

}  // namespace detail

/// Measure of the cylinder of all paths through a given vertex at a given
/// level (the measure depends only on the endpoint):
///   mu = x_v / (lambda^(level - tail_start) * <unit, x>)
/// where x is the Perron eigenvector of the transposed tail and lambda the
/// Perron value.  Exact in a rational or quadratic field when the tail's
/// characteristic polynomial splits off integer roots down to degree <= 2;
/// floating point with tolerance 1e-10 otherwise.
inline CylinderMeasure measure_at_vertex(const BratteliDiagram& d, std::size_t level,
                                         std::size_t vertex) {
    if (!d.stationary()) throw Error(Errc::NotStationary, "measure requires a stationary tail");
    const Matrix<Int>& tail = d.matrices().back();
    if (!is_primitive(tail)) throw Error(Errc::NotPrimitive, "tail matrix is not primitive");
    std::size_t n0 = d.tail_start();
    if (level < n0)
        throw Error(Errc::LevelOutOfRange, "level " + std::to_string(level) +
                                               " lies inside the strict prefix (tail starts at " +
                                               std::to_string(n0) + ")");
    if (vertex >= d.level_size(level)) throw Error(Errc::InvalidPath, "vertex out of range");
    std::size_t steps = level - n0;
    std::vector<Int> unit = d.dims(n0).values;

    if (auto lambda = exact_perron(tail)) {
        if (std::holds_alternative<Rat>(*lambda))
            return detail::measure_from_field(tail, unit, steps, vertex, std::get<Rat>(*lambda),
                                              Rat(1));
        const Quad& q = std::get<Quad>(*lambda);
        return detail::measure_from_field(tail, unit, steps, vertex, q,
                                          Quad(Rat(1), Rat(0), q.radicand()));
    }

    // higher-degree Perron field: floating-point fallback
    SpectralBracket br = perron_bracket(tail, Rat(1e-13));
    double lambda = br.midpoint();
    std::size_t k = tail.rows();
    Matrix<Int> at = tail.transpose();
    std::vector<double> x(k, 1.0);
    for (std::size_t iter = 0; iter < 20000; ++iter) {
        std::vector<double> y(k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                y[i] += static_cast<double>(at(i, j)) * x[j];
        double norm = 0.0;
        for (double v : y) norm += v;
        double delta = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            y[i] /= norm;
            delta = std::max(delta, std::abs(y[i] - x[i]));
        }
        x = std::move(y);
        if (delta < 1e-15) break;
    }
    double denom = 0.0;
    for (std::size_t i = 0; i < k; ++i) denom += static_cast<double>(unit[i]) * x[i];
    CylinderMeasure out;
    out.value = x[vertex] / (std::pow(lambda, static_cast<double>(steps)) * denom);
    out.tolerance = 1e-10;
    return out;
}

/// Measure of the cylinder set of a finite path (validated against the
/// diagram); equals measure_at_vertex at the path's endpoint.
inline CylinderMeasure stationary_measure(const BratteliDiagram& d, const PathWord& path) {
    if (!d.stationary()) throw Error(Errc::NotStationary, "measure requires a stationary tail");
    validate_path(d, path);
    return measure_at_vertex(d, path.depth(), path.end_vertex);
}

}  // namespace bratteli
