#pragma once

#include <cstddef>
#include <vector>

#include "bigint.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace bratteli {

/// Pascal's triangle as a Bratteli diagram: level n has n+1 vertices,
/// vertex j at level n+1 receives one edge from each of vertices j-1 and j
/// at level n (where those exist), so dims(n) is the n-th binomial row.
inline BratteliDiagram pascal(std::size_t depth) {
    std::vector<std::size_t> sizes;
    std::vector<Matrix<Int>> mats;
    for (std::size_t n = 0; n <= depth; ++n) sizes.push_back(n + 1);
    for (std::size_t n = 0; n < depth; ++n) {
        Matrix<Int> m(n + 2, n + 1);
        for (std::size_t j = 0; j < n + 2; ++j) {
            if (j < n + 1) m(j, j) = 1;
            if (j > 0) m(j, j - 1) = 1;
        }
        mats.push_back(std::move(m));
    }
    return BratteliDiagram::validate(std::move(sizes), std::move(mats), false);
}

/// The gauge-invariant CAR algebra's diagram is Pascal's triangle.
inline BratteliDiagram gicar(std::size_t depth) { return pascal(depth); }

/// UHF-type diagram: one vertex per level, step n multiplies the dimension
/// by factors[n].  Stationary variants repeat the final factor forever.
inline BratteliDiagram uhf(const std::vector<Int>& factors, bool stationary = false) {
    if (factors.empty()) throw Error(Errc::BadParam, "uhf: factor list is empty");
    std::vector<std::size_t> sizes(factors.size() + 1, 1);
    std::vector<Matrix<Int>> mats;
    for (const Int& f : factors) {
        if (f < 2) throw Error(Errc::BadParam, "uhf: factors must be at least 2");
        mats.push_back(Matrix<Int>{{f}});
    }
    return BratteliDiagram::validate(std::move(sizes), std::move(mats), stationary);
}

/// Base-b odometer diagram: single vertex per level, b parallel edges,
/// stationary.
inline BratteliDiagram odometer(const Int& base) {
    if (base < 2) throw Error(Errc::BadParam, "odometer: base must be at least 2");
    return uhf({base}, true);
}

/// Stationary diagram with the given square tail matrix and the canonical
/// one-edge-per-vertex root step (prefix column of ones).
inline BratteliDiagram stationary_from_tail(const Matrix<Int>& tail) {
    if (!tail.is_square()) throw Error(Errc::NonSquareTail, "tail matrix must be square");
    std::size_t k = tail.rows();
    if (k == 0) throw Error(Errc::EmptyDiagram, "tail matrix is empty");
    Matrix<Int> root_step(k, 1, Int(1));
    return BratteliDiagram::validate({1, k, k}, {root_step, tail}, true);
}

}  // namespace bratteli
