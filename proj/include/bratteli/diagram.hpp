#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace bratteli {

/// Exact dimension vector at one level: values[v] is the dimension carried by
/// vertex v (root-normalized, so dims at level 0 are always [1]).
struct DimensionVector {
    std::size_t level = 0;
    std::vector<Int> values;

    Int total() const {
        Int s = 0;
        for (const auto& v : values) s += v;
        return s;
    }

    bool operator==(const DimensionVector& o) const {
        return level == o.level && values == o.values;
    }
};

/// A leveled multigraph given by level sizes k0..k_{L-1} (k0 = 1, the root)
/// and multiplicity matrices M0..M_{L-2}, where Mn has shape k_{n+1} x k_n and
/// Mn(j, i) counts the edges from vertex i at level n into vertex j at level
/// n+1.  A diagram may declare a stationary tail: the last matrix (which must
/// be square) repeats for every step beyond the prefix, so the finite object
/// stands for an infinite diagram.
///
/// Invariants established by validation and preserved forever after:
///   - every level is non-empty; the root level has exactly one vertex;
///   - all entries are non-negative;
///   - no matrix has a zero row (every non-root vertex has an incoming edge;
///     zero columns are allowed and model dying summands);
///   - a stationary tail matrix is square.
class BratteliDiagram {
public:
    /// Validating factory; the only way to construct a diagram.
    static BratteliDiagram validate(std::vector<std::size_t> sizes,
                                    std::vector<Matrix<Int>> matrices, bool stationary) {
        if (sizes.empty()) throw Error(Errc::EmptyDiagram, "diagram has no levels");
        for (std::size_t n = 0; n < sizes.size(); ++n)
            if (sizes[n] == 0)
                throw Error(Errc::EmptyDiagram, "level " + std::to_string(n) + " has no vertices");
        if (sizes[0] != 1)
            throw Error(Errc::NonUnitalRoot,
                        "root level must have exactly one vertex, got " + std::to_string(sizes[0]));
        if (matrices.size() + 1 != sizes.size())
            throw Error(Errc::ShapeMismatch,
                        "expected " + std::to_string(sizes.size() - 1) + " matrices, got " +
                            std::to_string(matrices.size()));
        for (std::size_t n = 0; n < matrices.size(); ++n) {
            const auto& m = matrices[n];
            if (m.rows() != sizes[n + 1] || m.cols() != sizes[n])
                throw Error(Errc::ShapeMismatch,
                            "matrix " + std::to_string(n) + " has shape " + std::to_string(m.rows()) +
                                "x" + std::to_string(m.cols()) + ", expected " +
                                std::to_string(sizes[n + 1]) + "x" + std::to_string(sizes[n]));
            if (m.any_negative())
                throw Error(Errc::NegativeEntry, "matrix " + std::to_string(n) + " has a negative entry");
            for (std::size_t j = 0; j < m.rows(); ++j)
                if (m.row_is_zero(j))
                    throw Error(Errc::ZeroRow, "vertex " + std::to_string(j) + " at level " +
                                                   std::to_string(n + 1) + " has no incoming edge");
        }
        if (stationary) {
            if (matrices.empty())
                throw Error(Errc::NonSquareTail, "stationary tail requires at least two levels");
            if (!matrices.back().is_square())
                throw Error(Errc::NonSquareTail,
                            "tail matrix has shape " + std::to_string(matrices.back().rows()) + "x" +
                                std::to_string(matrices.back().cols()));
        }
        return BratteliDiagram(std::move(sizes), std::move(matrices), stationary);
    }

    /// Number of explicitly stored levels.
    std::size_t prefix_levels() const { return sizes_.size(); }

    bool stationary() const { return stationary_; }

    /// Index of the first tail level (where the repeating matrix starts
    /// applying); only meaningful for stationary diagrams.
    std::size_t tail_start() const { return sizes_.size() - 2; }

    const std::vector<std::size_t>& sizes() const { return sizes_; }
    const std::vector<Matrix<Int>>& matrices() const { return matrices_; }

    /// Vertex count at any level; beyond the prefix only for stationary tails.
    std::size_t level_size(std::size_t n) const {
        if (n < sizes_.size()) return sizes_[n];
        if (stationary_) return sizes_.back();
        throw Error(Errc::LevelOutOfRange,
                    "level " + std::to_string(n) + " outside prefix of length " +
                        std::to_string(sizes_.size()));
    }

    /// Multiplicity matrix for the step level n -> n+1.
    const Matrix<Int>& step_matrix(std::size_t n) const {
        if (n + 1 < sizes_.size()) return matrices_[n];
        if (stationary_) return matrices_.back();
        throw Error(Errc::LevelOutOfRange,
                    "no step from level " + std::to_string(n) + " in prefix of length " +
                        std::to_string(sizes_.size()));
    }

    /// Largest level reachable: prefix end for finite diagrams, unbounded for
    /// stationary ones (returned as max size_t).
    std::size_t max_level() const {
        return stationary_ ? static_cast<std::size_t>(-1) : sizes_.size() - 1;
    }

    /// Exact dimension vector at level n: dims(0) = [1], dims(n+1) = Mn * dims(n).
    DimensionVector dims(std::size_t n) const {
        std::size_t L = sizes_.size();
        std::vector<Int> v{Int(1)};
        std::size_t upto = std::min(n, L - 1);
        for (std::size_t m = 0; m < upto; ++m) v = matrices_[m] * v;
        if (n >= L) {
            if (!stationary_)
                throw Error(Errc::LevelOutOfRange,
                            "level " + std::to_string(n) + " outside prefix of length " +
                                std::to_string(L));
            v = matrices_.back().pow(n - (L - 1)) * v;
        }
        return DimensionVector{n, std::move(v)};
    }

    /// Product of step matrices transporting level `from` to level `to`
    /// (identity when from == to).
    Matrix<Int> telescoped(std::size_t from, std::size_t to) const {
        if (from > to)
            throw Error(Errc::LevelOutOfRange, "telescoped: from " + std::to_string(from) +
                                                   " exceeds to " + std::to_string(to));
        Matrix<Int> acc = Matrix<Int>::identity(level_size(from));
        for (std::size_t n = from; n < to; ++n) acc = step_matrix(n) * acc;
        return acc;
    }

    /// Keep only the listed levels, replacing each run of dropped levels by
    /// the product of its step matrices.  The keep list must be strictly
    /// increasing and start at the root.  A stationary diagram continues past
    /// the last kept level with the same spacing, so the result repeats the
    /// tail power matching the final gap; extra prefix levels are stored only
    /// when that power is not already the last stored product.  A single kept
    /// level truncates to the bare root.
    BratteliDiagram telescope(const std::vector<std::size_t>& keep) const {
        if (keep.empty()) throw Error(Errc::MissingRoot, "keep list is empty");
        if (keep.front() != 0)
            throw Error(Errc::MissingRoot, "keep list must start at level 0");
        for (std::size_t i = 1; i < keep.size(); ++i)
            if (keep[i] <= keep[i - 1])
                throw Error(Errc::UnsortedKeepList, "keep list must be strictly increasing");
        std::size_t L = sizes_.size();
        if (!stationary_ && keep.back() > L - 1)
            throw Error(Errc::LevelOutOfRange,
                        "kept level " + std::to_string(keep.back()) + " outside prefix of length " +
                            std::to_string(L));
        std::vector<std::size_t> new_sizes;
        std::vector<Matrix<Int>> new_mats;
        new_sizes.reserve(keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i) {
            new_sizes.push_back(level_size(keep[i]));
            if (i + 1 < keep.size()) new_mats.push_back(telescoped(keep[i], keep[i + 1]));
        }
        if (!stationary_ || keep.size() < 2)
            return validate(std::move(new_sizes), std::move(new_mats), false);
        std::size_t g = keep[keep.size() - 1] - keep[keep.size() - 2];
        Matrix<Int> tail_g = matrices_.back().pow(g);
        // continuation windows vary until their start reaches the tail
        std::size_t pos = keep.back();
        while (pos < L - 2) {
            new_mats.push_back(telescoped(pos, pos + g));
            pos += g;
            new_sizes.push_back(level_size(pos));
        }
        if (new_mats.back() != tail_g) {
            new_mats.push_back(tail_g);
            new_sizes.push_back(sizes_.back());
        }
        return validate(std::move(new_sizes), std::move(new_mats), true);
    }

    bool operator==(const BratteliDiagram& o) const {
        return sizes_ == o.sizes_ && matrices_ == o.matrices_ && stationary_ == o.stationary_;
    }

private:
    BratteliDiagram(std::vector<std::size_t> sizes, std::vector<Matrix<Int>> matrices,
                    bool stationary)
        : sizes_(std::move(sizes)), matrices_(std::move(matrices)), stationary_(stationary) {}

    std::vector<std::size_t> sizes_;
    std::vector<Matrix<Int>> matrices_;
    bool stationary_;
};

}  // namespace bratteli
