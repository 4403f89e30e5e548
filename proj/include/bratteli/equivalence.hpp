#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace bratteli {

/// A zig-zag of non-negative integer maps witnessing diagram equivalence.
///
/// The maps alternate between the two diagrams:
///   P_0 : A@a_0 -> B@b_0  (always [[1]] at the roots a_0 = b_0 = 0),
///   Q_0 : B@b_0 -> A@a_1,
///   P_1 : A@a_1 -> B@b_1, ...
/// stored flat as maps = [P_0, Q_0, P_1, Q_1, ...] over strictly increasing
/// level schedules levels_a = [a_0, a_1, ...] and levels_b = [b_0, b_1, ...].
/// Each map added after P_0 closes one composition equation:
///   Q_i * P_i     == telescoped matrix of A from a_i to a_{i+1},
///   P_{i+1} * Q_i == telescoped matrix of B from b_i to b_{i+1},
/// so the zig-zag factors both diagrams' own transition products through the
/// other diagram, level by level.
struct IntertwiningWitness {
    std::vector<std::size_t> levels_a;
    std::vector<std::size_t> levels_b;
    std::vector<Matrix<Int>> maps;

    /// Number of composition equations the witness closes.
    std::size_t equations() const { return maps.empty() ? 0 : maps.size() - 1; }

    bool operator==(const IntertwiningWitness& o) const {
        return levels_a == o.levels_a && levels_b == o.levels_b && maps == o.maps;
    }
};

struct EquivalenceResult {
    bool found = false;
    std::optional<IntertwiningWitness> witness;
};

/// Checks a witness against both diagrams.  Structural defects (wrong map
/// counts, non-increasing schedules, shape mismatches, schedule levels
/// outside a finite diagram) throw ShapeMismatch; value defects (a broken
/// composition equation, a negative entry, a root map other than [[1]])
/// return false.
inline bool verify_intertwining(const BratteliDiagram& a, const BratteliDiagram& b,
                                const IntertwiningWitness& w) {
    if (w.maps.empty()) throw Error(Errc::ShapeMismatch, "witness has no maps");
    std::size_t p_count = (w.maps.size() + 1) / 2;
    std::size_t q_count = w.maps.size() / 2;
    if (w.levels_b.size() != p_count || w.levels_a.size() != q_count + 1)
        throw Error(Errc::ShapeMismatch, "schedule lengths do not match map count");
    if (w.levels_a.front() != 0 || w.levels_b.front() != 0)
        throw Error(Errc::ShapeMismatch, "schedules must start at the roots");
    for (std::size_t i = 1; i < w.levels_a.size(); ++i)
        if (w.levels_a[i] <= w.levels_a[i - 1])
            throw Error(Errc::ShapeMismatch, "A-schedule not strictly increasing");
    for (std::size_t i = 1; i < w.levels_b.size(); ++i)
        if (w.levels_b[i] <= w.levels_b[i - 1])
            throw Error(Errc::ShapeMismatch, "B-schedule not strictly increasing");
    try {
        for (std::size_t i = 0; i < p_count; ++i) {
            const Matrix<Int>& p = w.maps[2 * i];
            if (p.rows() != b.level_size(w.levels_b[i]) || p.cols() != a.level_size(w.levels_a[i]))
                throw Error(Errc::ShapeMismatch, "P map shape mismatch");
        }
        for (std::size_t i = 0; i < q_count; ++i) {
            const Matrix<Int>& q = w.maps[2 * i + 1];
            if (q.rows() != a.level_size(w.levels_a[i + 1]) ||
                q.cols() != b.level_size(w.levels_b[i]))
                throw Error(Errc::ShapeMismatch, "Q map shape mismatch");
        }
        for (const auto& m : w.maps)
            if (m.any_negative()) return false;
        if (w.maps[0] != Matrix<Int>{{Int(1)}}) return false;
        for (std::size_t i = 0; i < q_count; ++i) {
            Matrix<Int> lhs = w.maps[2 * i + 1] * w.maps[2 * i];
            if (lhs != a.telescoped(w.levels_a[i], w.levels_a[i + 1])) return false;
        }
        for (std::size_t i = 1; i < p_count; ++i) {
            Matrix<Int> lhs = w.maps[2 * i] * w.maps[2 * i - 1];
            if (lhs != b.telescoped(w.levels_b[i - 1], w.levels_b[i])) return false;
        }
    } catch (const Error& e) {
        if (e.code() == Errc::ShapeMismatch) throw;
        throw Error(Errc::ShapeMismatch, e.what());
    }
    return true;
}

namespace detail {

/// All non-negative integer rows y with y*K = t and y*dims = target, in
/// ascending lexicographic order.  The dims equation bounds every entry, so
/// the enumeration is finite without any artificial entry cap.
inline void solve_rows(const Matrix<Int>& k_mat, const std::vector<Int>& t,
                       const std::vector<Int>& dims, const Int& target,
                       std::vector<std::vector<Int>>& out) {
    std::size_t m = k_mat.rows(), c = k_mat.cols();
    std::vector<Int> y(m), t_rem(t);
    Int s_rem = target;

    auto rec = [&](auto&& self, std::size_t w) -> void {
        if (w == m) {
            if (s_rem != 0) return;
            for (const auto& r : t_rem)
                if (r != 0) return;
            out.push_back(y);
            return;
        }
        if (w + 1 == m) {
            // the final entry is forced: it must clear both remainders
            Int val = s_rem / dims[w];
            if (val * dims[w] != s_rem) return;
            for (std::size_t j = 0; j < c; ++j)
                if (val * k_mat(w, j) != t_rem[j]) return;
            y[w] = val;
            out.push_back(y);
            y[w] = 0;
            return;
        }
        // upper bound from the dims equation (dims entries are positive) and
        // from each still-unfilled column of the composition equation
        Int ub = s_rem / dims[w];
        for (std::size_t j = 0; j < c; ++j)
            if (k_mat(w, j) > 0) {
                Int cap = t_rem[j] / k_mat(w, j);
                if (cap < ub) ub = cap;
            }
        for (Int val = 0; val <= ub; ++val) {
            y[w] = val;
            if (val > 0) {
                s_rem -= dims[w];
                for (std::size_t j = 0; j < c; ++j) t_rem[j] -= k_mat(w, j);
            }
            self(self, w + 1);
        }
        // undo the cumulative subtraction of `ub` copies
        s_rem += ub * dims[w];
        for (std::size_t j = 0; j < c; ++j) t_rem[j] += ub * k_mat(w, j);
        y[w] = 0;
    };
    rec(rec, 0);
}

struct SearchState {
    const BratteliDiagram& a;
    const BratteliDiagram& b;
    std::size_t bound;
    IntertwiningWitness w;
};

inline bool search(SearchState& st) {
    if (st.w.equations() == st.bound) return true;
    bool advancing_a = st.w.maps.size() % 2 == 1;  // odd count: next map is a Q
    const BratteliDiagram& side = advancing_a ? st.a : st.b;
    const BratteliDiagram& other = advancing_a ? st.b : st.a;
    std::size_t current = advancing_a ? st.w.levels_a.back() : st.w.levels_b.back();
    std::size_t other_level = advancing_a ? st.w.levels_b.back() : st.w.levels_a.back();
    if (!side.stationary() && current == side.prefix_levels() - 1) {
        // this diagram's window is exhausted; accept the finite-prefix
        // witness only when both sides have closed at least one equation
        return st.w.equations() >= 2;
    }
    // once the other side's window is exhausted no further equation can
    // involve it, so a witness with both root equations closed is complete
    if (!other.stationary() && other_level == other.prefix_levels() - 1 &&
        st.w.equations() >= 2)
        return true;
    std::size_t reach = st.bound;
    if (!side.stationary()) reach = std::min(reach, side.prefix_levels() - 1);
    // by value: recursion below pushes onto st.w.maps, which reallocates
    const Matrix<Int> last = st.w.maps.back();
    std::vector<Int> d_src = other.dims(other_level).values;
    for (std::size_t next = current + 1; next <= reach; ++next) {
        Matrix<Int> t = side.telescoped(current, next);
        std::vector<Int> d_dst = side.dims(next).values;
        // enumerate candidate maps M with M*last = t row by row
        std::vector<std::vector<std::vector<Int>>> row_choices(t.rows());
        bool feasible = true;
        for (std::size_t u = 0; u < t.rows() && feasible; ++u) {
            std::vector<Int> t_row(t.cols());
            for (std::size_t j = 0; j < t.cols(); ++j) t_row[j] = t(u, j);
            solve_rows(last, t_row, d_src, d_dst[u], row_choices[u]);
            if (row_choices[u].empty()) feasible = false;
        }
        if (!feasible) continue;
        std::vector<std::size_t> pick(t.rows(), 0);
        auto choose = [&](auto&& self, std::size_t u) -> bool {
            if (u == t.rows()) {
                Matrix<Int> m(t.rows(), last.rows());
                for (std::size_t r = 0; r < t.rows(); ++r)
                    for (std::size_t j = 0; j < last.rows(); ++j)
                        m(r, j) = row_choices[r][pick[r]][j];
                st.w.maps.push_back(std::move(m));
                (advancing_a ? st.w.levels_a : st.w.levels_b).push_back(next);
                bool ok = search(st);
                if (!ok) {
                    st.w.maps.pop_back();
                    (advancing_a ? st.w.levels_a : st.w.levels_b).pop_back();
                }
                return ok;
            }
            for (pick[u] = 0; pick[u] < row_choices[u].size(); ++pick[u])
                if (self(self, u + 1)) return true;
            return false;
        };
        if (choose(choose, 0)) return true;
    }
    return false;
}

}  // namespace detail

/// Bounded search for an intertwining zig-zag.  The bound caps both the
/// number of composition equations and the absolute level reach on each side
/// (candidate entries need no cap: the dims-transport equation already bounds
/// them exactly).  Enumeration is depth-first over next-level choices
/// (ascending) and candidate rows (lexicographic), so the first witness found
/// is the lexicographically least and the result is deterministic.  A Found
/// result always passes verify_intertwining; NotFoundWithinBound proves
/// nothing.  For finite prefixes, a witness that exhausts a diagram's window
/// with at least one closed equation per side is accepted early, so Found on
/// pure prefixes certifies intertwinability of the inspected windows only.
inline EquivalenceResult find_intertwining(const BratteliDiagram& a, const BratteliDiagram& b,
                                           std::size_t bound) {
    if (bound < 1) throw Error(Errc::BoundTooSmall, "search bound must be at least 1");
    IntertwiningWitness root;
    root.levels_a = {0};
    root.levels_b = {0};
    root.maps = {Matrix<Int>{{Int(1)}}};
    if (a.prefix_levels() == 1 && b.prefix_levels() == 1) {
        // both diagrams are the bare root; the root map alone is the witness
        return {true, root};
    }
    detail::SearchState st{a, b, bound, std::move(root)};
    if (detail::search(st)) return {true, st.w};
    return {false, std::nullopt};
}

/// Prime-exponent profile of a UHF-type diagram (all level sizes 1).
/// Exponents are exact for stationary diagrams (tail primes get INFINITY,
/// encoded as nullopt); pure prefixes yield a lower bound and are flagged.
struct Supernatural {
    std::map<Int, std::optional<std::uint64_t>> exponents;
    bool lower_bound_only = false;

    bool operator==(const Supernatural& o) const {
        return exponents == o.exponents && lower_bound_only == o.lower_bound_only;
    }
};

namespace detail {

inline void accumulate_factors(Int n, std::map<Int, std::uint64_t>& out) {
    for (Int p = 2; p * p <= n && p <= 1000000; ++p)
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    if (n > 1) {
        // no factor <= 10^6 remains: below 10^12 the remainder is prime;
        // beyond that, ask Miller-Rabin before trusting it
        if (n >= Int("1000000000000") && !boost::multiprecision::miller_rabin_test(n, 32))
            throw Error(Errc::BadParam, "entry too large to factor: " + n.str());
        ++out[n];
    }
}

}  // namespace detail

inline Supernatural supernatural_invariant(const BratteliDiagram& d) {
    for (std::size_t n = 0; n < d.prefix_levels(); ++n)
        if (d.level_size(n) != 1)
            throw Error(Errc::NotUHFShape,
                        "level " + std::to_string(n) + " has more than one vertex");
    Supernatural s;
    std::map<Int, std::uint64_t> finite;
    std::size_t steps = d.prefix_levels() - 1;
    std::size_t finite_steps = d.stationary() ? steps - 1 : steps;
    for (std::size_t n = 0; n < finite_steps; ++n)
        detail::accumulate_factors(d.matrices()[n](0, 0), finite);
    for (const auto& [p, e] : finite) s.exponents[p] = e;
    if (d.stationary()) {
        std::map<Int, std::uint64_t> tail;
        detail::accumulate_factors(d.matrices().back()(0, 0), tail);
        for (const auto& [p, e] : tail) s.exponents[p] = std::nullopt;
    } else {
        s.lower_bound_only = true;
    }
    return s;
}

inline std::string to_string(const Supernatural& s) {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [p, e] : s.exponents) {
        if (!first) os << ", ";
        first = false;
        os << p.str() << ':';
        if (e)
            os << *e;
        else
            os << "∞";
    }
    os << '}';
    if (s.lower_bound_only) os << " (lower bound)";
    return os.str();
}

}  // namespace bratteli
