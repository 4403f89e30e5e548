#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "matrix.hpp"

namespace bratteli {

/// K0 presentation of a stationary diagram: the ordered group is the direct
/// limit of Z^rank along the repeating tail matrix, with the dimension vector
/// at the first tail level as order unit.
struct StationaryPresentation {
    std::size_t rank = 0;
    Matrix<Int> matrix;
    DimensionVector unit;
};

inline StationaryPresentation k0_presentation(const BratteliDiagram& d) {
    if (!d.stationary())
        throw Error(Errc::NotStationary, "diagram has no stationary tail");
    const Matrix<Int>& tail = d.matrices().back();
    return {tail.rows(), tail, d.dims(d.tail_start())};
}

/// Necessary-condition numerical invariants of a stationary presentation.
/// All integer data is exact; the Perron value carries an exact rational
/// bracket of width below the requested tolerance.  These invariants can
/// refute isomorphism, never prove it.
struct InvariantReport {
    std::vector<Int> char_poly;  // ascending coefficients, monic
    Int determinant;
    std::size_t eventual_rank = 0;
    double perron = 0.0;
    double perron_tolerance = 0.0;
    Rat perron_lo, perron_hi;
    bool primitive = false;
};

inline InvariantReport stationary_invariants(const StationaryPresentation& p, double tolerance) {
    if (!(tolerance > 0)) throw Error(Errc::BadParam, "tolerance must be positive");
    InvariantReport r;
    r.char_poly = char_poly(p.matrix);
    std::size_t k = p.rank;
    // determinant two ways: the char-poly constant term gives
    // det(A) = (-1)^k c0, and Bareiss elimination computes it directly
    Int det_from_poly = (k % 2 == 0) ? r.char_poly[0] : -r.char_poly[0];
    r.determinant = det_bareiss(p.matrix);
    if (r.determinant != det_from_poly)
        throw Error(Errc::ConvergenceFailure, "determinant routes disagree");
    r.eventual_rank = rank_bareiss(p.matrix.pow(k));
    SpectralBracket br = perron_bracket(p.matrix, Rat(tolerance));
    r.perron = br.midpoint();
    r.perron_tolerance = tolerance;
    r.perron_lo = br.lo;
    r.perron_hi = br.hi;
    r.primitive = is_primitive(p.matrix);
    return r;
}

/// Distinguished when any exact invariant differs, or the Perron values
/// differ by more than the combined tolerances; Inconclusive otherwise
/// (which is NOT a proof of isomorphism).  `reason` names the first
/// distinguishing invariant, in the order: char_poly degree, determinant,
/// char_poly, eventual_rank, primitive, perron.
struct ComparisonResult {
    bool distinguished = false;
    std::string reason;
};

inline ComparisonResult compare_invariants(const InvariantReport& r1, const InvariantReport& r2) {
    if (r1.char_poly.size() != r2.char_poly.size()) return {true, "char_poly"};
    if (r1.determinant != r2.determinant) return {true, "determinant"};
    if (r1.char_poly != r2.char_poly) return {true, "char_poly"};
    if (r1.eventual_rank != r2.eventual_rank) return {true, "eventual_rank"};
    if (r1.primitive != r2.primitive) return {true, "primitive"};
    if (std::abs(r1.perron - r2.perron) > r1.perron_tolerance + r2.perron_tolerance)
        return {true, "perron"};
    return {false, ""};
}

/// Monic polynomial rendering, descending powers: "x^2 - x - 1".
inline std::string poly_to_string(const std::vector<Int>& ascending) {
    if (ascending.empty()) return "0";
    std::string out;
    for (std::size_t i = ascending.size(); i-- > 0;) {
        const Int& c = ascending[i];
        if (c == 0 && !(ascending.size() == 1)) continue;
        Int a = boost::multiprecision::abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        bool unit_coeff = (a == 1) && i > 0;
        if (!unit_coeff) out += a.str();
        if (i > 0) {
            out += "x";
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    if (out.empty()) out = "0";
    return out;
}

}  // namespace bratteli
