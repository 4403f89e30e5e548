#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace bratteli {

/// Rank of an integer matrix over the rationals, by fraction-free
/// (Bareiss) elimination with row pivoting and column skipping.
inline std::size_t rank_bareiss(Matrix<Int> m) {
    std::size_t rows = m.rows(), cols = m.cols();
    Int prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m(p, c) == 0) ++p;
        if (p == rows) continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(p, j));
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j)
                m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
            m(i, c) = 0;
        }
        prev = m(r, c);
        ++r;
    }
    return r;
}

/// Exact determinant of a square integer matrix (Bareiss elimination; the
/// final pivot is the determinant up to row-swap sign).
inline Int det_bareiss(Matrix<Int> m) {
    if (!m.is_square()) throw Error(Errc::ShapeMismatch, "determinant of non-square matrix");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j)
                m(i, j) = (m(c, c) * m(i, j) - m(i, c) * m(c, j)) / prev;
            m(i, c) = 0;
        }
        prev = m(c, c);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

/// Rank over the rationals by plain Gaussian elimination; independent
/// crosscheck for rank_bareiss.
inline std::size_t rank_rational(const Matrix<Int>& a) {
    std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = Rat(a(i, j));
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

/// Characteristic polynomial det(xI - A) of a square integer matrix by the
/// Faddeev-LeVerrier recurrence; all divisions are exact.  Coefficients are
/// returned ascending: index i holds the coefficient of x^i, the leading
/// coefficient is 1.
inline std::vector<Int> char_poly(const Matrix<Int>& a) {
    if (!a.is_square()) throw Error(Errc::ShapeMismatch, "char_poly of non-square matrix");
    std::size_t k = a.rows();
    std::vector<Int> c(k + 1, 0);
    c[k] = 1;
    Matrix<Int> m(k, k);
    for (std::size_t step = 1; step <= k; ++step) {
        if (step == 1) {
            m = a;
        } else {
            for (std::size_t i = 0; i < k; ++i) m(i, i) += c[k - step + 1];
            m = a * m;
        }
        Int tr = 0;
        for (std::size_t i = 0; i < k; ++i) tr += m(i, i);
        if (tr % Int(step) != 0)
            throw Error(Errc::ConvergenceFailure, "char_poly: inexact trace division");
        c[k - step] = -tr / Int(step);
    }
    return c;
}

/// Evaluate a polynomial (ascending coefficients) at a square matrix.
inline Matrix<Int> eval_poly(const std::vector<Int>& coeffs, const Matrix<Int>& a) {
    std::size_t k = a.rows();
    Matrix<Int> acc(k, k);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = acc * a;
        for (std::size_t d = 0; d < k; ++d) acc(d, d) += coeffs[i];
    }
    return acc;
}

/// Strongly connected components of the directed graph with an edge i -> j
/// whenever a(j, i) > 0.  Components are returned in a deterministic order
/// (reverse topological), each listing its vertices ascending.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(const Matrix<Int>& a) {
    std::size_t n = a.rows();
    std::vector<std::size_t> index(n, SIZE_MAX), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> comps;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_child;
    };
    for (std::size_t start = 0; start < n; ++start) {
        if (index[start] != SIZE_MAX) continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = counter++;
        stack.push_back(start);
        on_stack[start] = 1;
        while (!frames.empty()) {
            auto& [v, next] = frames.back();
            bool descended = false;
            // edge v -> w exists when a(w, v) > 0
            for (std::size_t w = next; w < n; ++w) {
                if (a(w, v) == 0) continue;
                frames.back().next_child = w + 1;
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            std::size_t child = v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().v] = std::min(low[frames.back().v], low[child]);
        }
    }
    return comps;
}

/// Primitivity of a non-negative square matrix, decided exactly: A is
/// primitive iff A^w is strictly positive for the Wielandt exponent
/// w = k^2 - 2k + 2 (boolean matrix powers only).
inline bool is_primitive(const Matrix<Int>& a) {
    if (!a.is_square()) throw Error(Errc::ShapeMismatch, "is_primitive of non-square matrix");
    std::size_t k = a.rows();
    if (k == 0) return false;
    std::size_t w = k * k - 2 * k + 2;
    std::vector<char> base(k * k), result(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        result[i * k + i] = 1;
        for (std::size_t j = 0; j < k; ++j) base[i * k + j] = a(i, j) > 0 ? 1 : 0;
    }
    auto mul = [k](const std::vector<char>& x, const std::vector<char>& y) {
        std::vector<char> z(k * k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t m = 0; m < k; ++m) {
                if (!x[i * k + m]) continue;
                for (std::size_t j = 0; j < k; ++j)
                    if (y[m * k + j]) z[i * k + j] = 1;
            }
        return z;
    };
    for (std::size_t p = w; p; p >>= 1u) {
        if (p & 1u) result = mul(result, base);
        base = mul(base, base);
    }
    return std::all_of(result.begin(), result.end(), [](char x) { return x != 0; });
}

/// Exact rational bracket around a spectral radius.
struct SpectralBracket {
    Rat lo, hi;
    double midpoint() const {
        return (static_cast<double>(lo) + static_cast<double>(hi)) / 2.0;
    }
    double width() const { return static_cast<double>(hi - lo); }
};

namespace detail {

/// Collatz-Wielandt bracket for a primitive matrix B: for any strictly
/// positive x, min_i (Bx)_i/x_i <= rho(B) <= max_i (Bx)_i/x_i, and both
/// bounds converge under power iteration.  Brackets from successive iterates
/// are intersected; all arithmetic is exact.
inline SpectralBracket collatz_wielandt(const Matrix<Int>& b, const Rat& tol) {
    std::size_t k = b.rows();
    std::vector<Int> x(k, 1);
    Rat lo(0), hi;
    bool have_hi = false;
    constexpr std::size_t max_iter = 200000;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::vector<Int> y = b * x;
        Rat mn, mx;
        for (std::size_t i = 0; i < k; ++i) {
            Rat r = Rat(y[i]) / Rat(x[i]);
            if (i == 0) {
                mn = mx = r;
            } else {
                if (r < mn) mn = r;
                if (r > mx) mx = r;
            }
        }
        if (mn > lo) lo = mn;
        if (!have_hi || mx < hi) {
            hi = mx;
            have_hi = true;
        }
        if (hi - lo < tol) return {lo, hi};
        Int g = y[0];
        for (std::size_t i = 1; i < k; ++i) g = boost::multiprecision::gcd(g, y[i]);
        if (g > 1)
            for (auto& v : y) v /= g;
        x = std::move(y);
    }
    throw Error(Errc::ConvergenceFailure, "spectral bracket did not reach tolerance");
}

}  // namespace detail

/// Exact bracket around the spectral radius (Perron value) of a non-negative
/// square integer matrix.  The matrix is split into strongly connected
/// components; each irreducible block B is bracketed by Collatz-Wielandt
/// iteration on B + I (primitive whenever B is irreducible), and the overall
/// radius is the envelope maximum of the component brackets.
inline SpectralBracket perron_bracket(const Matrix<Int>& a, const Rat& tol) {
    if (!a.is_square()) throw Error(Errc::ShapeMismatch, "perron_bracket of non-square matrix");
    std::size_t n = a.rows();
    if (n == 0) return {Rat(0), Rat(0)};
    Rat lo(0), hi(0);
    for (const auto& comp : strongly_connected_components(a)) {
        SpectralBracket br;
        if (comp.size() == 1 && a(comp[0], comp[0]) == 0) {
            br = {Rat(0), Rat(0)};
        } else {
            std::size_t m = comp.size();
            Matrix<Int> block(m, m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) block(i, j) = a(comp[i], comp[j]);
            for (std::size_t i = 0; i < m; ++i) block(i, i) += 1;
            br = detail::collatz_wielandt(block, tol);
            br.lo -= 1;
            br.hi -= 1;
            if (br.lo < 0) br.lo = 0;
        }
        if (br.lo > lo) lo = br.lo;
        if (br.hi > hi) hi = br.hi;
    }
    return {lo, hi};
}

/// Monic integer polynomial utilities for exact eigenvalue extraction:
/// strips all integer roots by synthetic division, returning the roots
/// (with multiplicity) and the monic residual.
struct IntegerRootSplit {
    std::vector<Int> roots;
    std::vector<Int> residual;  // ascending coefficients, monic
};

inline IntegerRootSplit split_integer_roots(std::vector<Int> poly) {
    IntegerRootSplit out;
    auto eval = [](const std::vector<Int>& p, const Int& x) {
        Int acc = 0;
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
        return acc;
    };
    auto deflate = [](const std::vector<Int>& p, const Int& r) {
        // p(x) = (x - r) q(x); synthetic division, exact for a true root
        std::vector<Int> q(p.size() - 1);
        Int carry = p.back();
        for (std::size_t i = p.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = p[i] + carry * r;
        }
        return q;
    };
    bool progress = true;
    while (poly.size() > 1 && progress) {
        progress = false;
        while (poly.size() > 1 && poly[0] == 0) {
            out.roots.push_back(0);
            poly.erase(poly.begin());
            progress = true;
        }
        if (poly.size() <= 1) break;
        // rational roots of a monic integer polynomial are integer divisors
        // of the constant term
        Int c0 = boost::multiprecision::abs(poly[0]);
        for (Int d = 1; d * d <= c0 && !progress; ++d) {
            if (c0 % d != 0) continue;
            Int cofactor = c0 / d;
            for (const Int& base : {Int(d), cofactor}) {
                Int negated = -base;
                for (const Int& cand : {base, negated}) {
                    if (eval(poly, cand) == 0) {
                        out.roots.push_back(cand);
                        poly = deflate(poly, cand);
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
        }
    }
    out.residual = std::move(poly);
    return out;
}

}  // namespace bratteli
