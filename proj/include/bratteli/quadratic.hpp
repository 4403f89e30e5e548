#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace bratteli {

/// Element a + b*sqrt(d) of a real quadratic field; d > 1 is a fixed
/// non-square radicand shared by every value mixed in arithmetic.
/// All operations and comparisons are exact.
class Quad {
public:
    Quad() : a_(0), b_(0), d_(0) {}
    Quad(Rat a, Rat b, Int d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {}
    static Quad from_rat(const Rat& r, const Int& d) { return Quad(r, Rat(0), d); }

    const Rat& rational_part() const { return a_; }
    const Rat& radical_part() const { return b_; }
    const Int& radicand() const { return d_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }

    Quad operator+(const Quad& o) const { return Quad(a_ + o.a_, b_ + o.b_, pick_d(o)); }
    Quad operator-(const Quad& o) const { return Quad(a_ - o.a_, b_ - o.b_, pick_d(o)); }
    Quad operator-() const { return Quad(-a_, -b_, d_); }

    Quad operator*(const Quad& o) const {
        Int d = pick_d(o);
        return Quad(a_ * o.a_ + b_ * o.b_ * Rat(d), a_ * o.b_ + b_ * o.a_, d);
    }

    Quad inverse() const {
        // 1/(a + b sqrt(d)) = (a - b sqrt(d)) / (a^2 - b^2 d); the norm is
        // nonzero for a nonzero element since d is not a perfect square
        Rat norm = a_ * a_ - b_ * b_ * Rat(d_);
        if (norm == 0) throw Error(Errc::ConvergenceFailure, "Quad: inverse of zero element");
        return Quad(a_ / norm, -b_ / norm, d_);
    }

    Quad operator/(const Quad& o) const { return *this * o.inverse(); }

    bool operator==(const Quad& o) const { return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const Quad& o) const { return !(*this == o); }

    /// Exact sign: -1, 0, or +1.
    int sign() const {
        int sa = cmp_zero(a_), sb = cmp_zero(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 with b^2 d
        Rat lhs = a_ * a_, rhs = b_ * b_ * Rat(d_);
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sa : sb;
    }

    bool operator<(const Quad& o) const { return (*this - o).sign() < 0; }
    bool operator>(const Quad& o) const { return (*this - o).sign() > 0; }

    double to_double() const {
        return static_cast<double>(a_) +
               static_cast<double>(b_) * std::sqrt(static_cast<double>(d_));
    }

    /// Render as "(p + q*sqrt(d))/r" over a common denominator, collapsing to
    /// plain rational form when the radical part vanishes.
    std::string str() const {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (b_ == 0) return to_string(a_);
        Int da = denominator(a_), db = denominator(b_);
        Int r = da / boost::multiprecision::gcd(da, db) * db;
        Int p = numerator(a_) * (r / da);
        Int q = numerator(b_) * (r / db);
        std::ostringstream os;
        os << '(';
        if (p != 0) os << p.str();
        if (q > 0 && p != 0) os << '+';
        if (q == -1)
            os << '-';
        else if (q != 1)
            os << q.str() << '*';
        os << "sqrt(" << d_.str() << "))";
        std::string s = os.str();
        if (r != 1) s += "/" + r.str();
        return s;
    }

private:
    static int cmp_zero(const Rat& r) { return r == 0 ? 0 : (r > 0 ? 1 : -1); }

    Int pick_d(const Quad& o) const {
        if (b_ == 0) return o.b_ == 0 ? (d_ != 0 ? d_ : o.d_) : o.d_;
        if (o.b_ != 0 && o.d_ != d_)
            throw Error(Errc::ConvergenceFailure, "Quad: mixed radicands");
        return d_;
    }

    Rat a_, b_;
    Int d_;
};

/// Exact scalar: rational, or quadratic irrational.
using ExactScalar = std::variant<Rat, Quad>;

inline double exact_to_double(const ExactScalar& v) {
    if (std::holds_alternative<Rat>(v)) return static_cast<double>(std::get<Rat>(v));
    return std::get<Quad>(v).to_double();
}

inline std::string exact_to_string(const ExactScalar& v) {
    if (std::holds_alternative<Rat>(v)) return to_string(std::get<Rat>(v));
    return std::get<Quad>(v).str();
}

/// Largest real root of a monic integer polynomial whose irrational part has
/// degree at most two: splits off all integer roots, then solves the residual
/// quadratic exactly.  Returns nothing when the residual degree exceeds two
/// (the root is then not expressible in a quadratic field).
inline std::optional<ExactScalar> max_real_root(const std::vector<Int>& poly) {
    IntegerRootSplit split = split_integer_roots(poly);
    std::optional<Int> best_int;
    for (const Int& r : split.roots)
        if (!best_int || r > *best_int) best_int = r;

    std::size_t deg = split.residual.size() - 1;
    if (deg == 0) {
        if (!best_int) return std::nullopt;
        return ExactScalar(Rat(*best_int));
    }
    if (deg == 1) {
        // monic x + c0, root -c0; an integer root, so it should have been
        // split off, but handle it anyway
        Int r = -split.residual[0];
        if (!best_int || r > *best_int) best_int = r;
        return ExactScalar(Rat(*best_int));
    }
    if (deg != 2) return std::nullopt;

    // x^2 + p x + q with discriminant p^2 - 4q; a perfect-square discriminant
    // cannot occur (such roots are integers and were split off), so a
    // non-negative discriminant yields genuine quadratic irrationals
    Int p = split.residual[1], q = split.residual[0];
    Int disc = p * p - 4 * q;
    if (disc < 0) {
        // complex pair; the maximum real root is an integer root
        if (!best_int) return std::nullopt;
        return ExactScalar(Rat(*best_int));
    }
    if (is_perfect_square(disc))
        throw Error(Errc::ConvergenceFailure, "max_real_root: unsplit rational root");
    // extract square factors so the radicand is small where cheaply possible
    Int s = 1, d = disc;
    for (Int f = 2; f <= 1000; ++f) {
        Int ff = f * f;
        while (d % ff == 0) {
            d /= ff;
            s *= f;
        }
    }
    Quad root(Rat(-p) / Rat(2), Rat(s) / Rat(2), d);  // the + branch is the larger root
    if (best_int && Quad::from_rat(Rat(*best_int), d) > root) return ExactScalar(Rat(*best_int));
    return ExactScalar(root);
}

/// Exact Perron value (spectral radius) of a non-negative square integer
/// matrix when it lives in a field of degree <= 2 over the rationals; the
/// spectral radius of a non-negative matrix is its largest real eigenvalue.
inline std::optional<ExactScalar> exact_perron(const Matrix<Int>& a) {
    return max_real_root(char_poly(a));
}

namespace detail {

/// Kernel vector of a singular square matrix over an exact field F
/// (F = Rat or Quad): Gauss-Jordan reduction, first free column set to 1.
/// Returns an empty vector when the matrix is invertible.
template <typename F>
std::vector<F> kernel_vector(std::vector<std::vector<F>> m, const F& one) {
    std::size_t n = m.size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    auto is_zero = [](const F& x) {
        if constexpr (std::is_same_v<F, Rat>)
            return x == 0;
        else
            return x.is_zero();
    };
    for (std::size_t c = 0; c < n && r < n; ++c) {
        std::size_t p = r;
        while (p < n && is_zero(m[p][c])) ++p;
        if (p == n) continue;
        std::swap(m[p], m[r]);
        F inv = one / m[r][c];
        for (std::size_t j = c; j < n; ++j) m[r][j] = m[r][j] * inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || is_zero(m[i][c])) continue;
            F f = m[i][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (r == n) return {};
    // first non-pivot column is the free variable
    std::size_t free_col = 0;
    {
        std::size_t idx = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (idx < pivot_col.size() && pivot_col[idx] == c) {
                ++idx;
                continue;
            }
            free_col = c;
            break;
        }
    }
    F zero = one - one;
    std::vector<F> x(n, zero);
    x[free_col] = one;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
        x[pivot_col[i]] = zero - m[i][free_col];
    return x;
}

}  // namespace detail

}  // namespace bratteli
