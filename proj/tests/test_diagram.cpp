#include <catch2/catch_amalgamated.hpp>

#include <bratteli/diagram.hpp>
#include <bratteli/generators.hpp>

#include "helpers.hpp"

using namespace bratteli;

namespace {

Matrix<Int> tail_golden() { return Matrix<Int>{{Int(1), Int(1)}, {Int(1), Int(0)}}; }

}  // namespace

TEST_CASE("diagram validation rejects malformed input") {
    std::vector<Matrix<Int>> none;
    REQUIRE_ERRC(BratteliDiagram::validate({}, none, false), Errc::EmptyDiagram);
    REQUIRE_ERRC(BratteliDiagram::validate({1, 0}, {Matrix<Int>(0, 1, Int(0))}, false),
                 Errc::EmptyDiagram);
    REQUIRE_ERRC(BratteliDiagram::validate({2, 2}, {Matrix<Int>(2, 2, Int(1))}, false),
                 Errc::NonUnitalRoot);
    // matrix count must be exactly levels - 1
    REQUIRE_ERRC(BratteliDiagram::validate({1, 2}, none, false), Errc::ShapeMismatch);
    // per-matrix shape must match the level sizes
    REQUIRE_ERRC(BratteliDiagram::validate({1, 2}, {Matrix<Int>(3, 1, Int(1))}, false),
                 Errc::ShapeMismatch);
    REQUIRE_ERRC(BratteliDiagram::validate({1, 2}, {Matrix<Int>{{Int(-1)}, {Int(1)}}}, false),
                 Errc::NegativeEntry);
    REQUIRE_ERRC(BratteliDiagram::validate({1, 2}, {Matrix<Int>{{Int(1)}, {Int(0)}}}, false),
                 Errc::ZeroRow);
    // stationary tail must be square
    REQUIRE_ERRC(BratteliDiagram::validate({1, 2}, {Matrix<Int>(2, 1, Int(1))}, true),
                 Errc::NonSquareTail);
    REQUIRE_ERRC(BratteliDiagram::validate({1}, none, true), Errc::NonSquareTail);
    // a bare root level is a valid (trivial) diagram
    BratteliDiagram root = BratteliDiagram::validate({1}, none, false);
    REQUIRE(root.prefix_levels() == 1);
    REQUIRE_FALSE(root.stationary());
}

TEST_CASE("gicar dimensions are the binomial rows") {
    for (std::size_t n = 0; n <= 12; ++n) {
        BratteliDiagram d = gicar(n);
        DimensionVector dv = d.dims(n);
        REQUIRE(dv.values.size() == n + 1);
        // independent oracle: additive Pascal recurrence on big integers
        std::vector<Int> row{Int(1)};
        for (std::size_t m = 1; m <= n; ++m) {
            std::vector<Int> next(m + 1, Int(0));
            for (std::size_t k = 0; k <= m; ++k) {
                if (k > 0) next[k] += row[k - 1];
                if (k < m) next[k] += row[k];
            }
            row = std::move(next);
        }
        REQUIRE(dv.values == row);
    }
}

TEST_CASE("stationary diagrams extend beyond the stored prefix") {
    BratteliDiagram od = odometer(2);
    REQUIRE(od.stationary());
    REQUIRE(od.prefix_levels() == 2);
    REQUIRE(od.tail_start() == 0);
    REQUIRE(od.level_size(40) == 1);
    Int p40 = od.dims(40).values[0];
    Int expect = 1;
    for (int i = 0; i < 40; ++i) expect *= 2;
    REQUIRE(p40 == expect);

    BratteliDiagram g = stationary_from_tail(tail_golden());
    REQUIRE(g.sizes() == std::vector<std::size_t>{1, 2, 2});
    REQUIRE(g.tail_start() == 1);
    // Fibonacci growth of the dimension vector
    REQUIRE(g.dims(1).values == std::vector<Int>{Int(1), Int(1)});
    REQUIRE(g.dims(2).values == std::vector<Int>{Int(2), Int(1)});
    REQUIRE(g.dims(3).values == std::vector<Int>{Int(3), Int(2)});
    REQUIRE(g.dims(7).values == std::vector<Int>{Int(21), Int(13)});

    BratteliDiagram p = pascal(3);
    REQUIRE_FALSE(p.stationary());
    REQUIRE_ERRC(p.dims(4), Errc::LevelOutOfRange);
    REQUIRE_ERRC(p.level_size(4), Errc::LevelOutOfRange);
}

TEST_CASE("telescoped products compose step matrices") {
    BratteliDiagram p = pascal(4);
    REQUIRE(p.telescoped(1, 1) == Matrix<Int>::identity(2));
    REQUIRE(p.telescoped(0, 2) == p.step_matrix(1) * p.step_matrix(0));
    REQUIRE(p.telescoped(1, 4) == p.step_matrix(3) * (p.step_matrix(2) * p.step_matrix(1)));

    BratteliDiagram od = odometer(3);
    REQUIRE(od.telescoped(2, 5) == Matrix<Int>{{Int(27)}});
}

TEST_CASE("telescope validates the keep list") {
    BratteliDiagram p = pascal(4);
    REQUIRE_ERRC(p.telescope({}), Errc::MissingRoot);
    REQUIRE_ERRC(p.telescope({1, 2}), Errc::MissingRoot);
    REQUIRE_ERRC(p.telescope({0, 3, 2}), Errc::UnsortedKeepList);
    REQUIRE_ERRC(p.telescope({0, 2, 2}), Errc::UnsortedKeepList);
    REQUIRE_ERRC(p.telescope({0, 5}), Errc::LevelOutOfRange);
    // keep-all is the identity
    REQUIRE(p.telescope({0, 1, 2, 3, 4}) == p);
}

TEST_CASE("telescope keeps dimension vectors at kept levels") {
    std::mt19937 rng(20260818);
    for (int trial = 0; trial < 200; ++trial) {
        BratteliDiagram d = testhelp::random_diagram(rng);
        std::vector<std::size_t> keep = testhelp::random_keep(rng, d.prefix_levels());
        BratteliDiagram t = d.telescope(keep);
        REQUIRE(t.prefix_levels() == keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            REQUIRE(t.dims(i).values == d.dims(keep[i]).values);
    }
}

TEST_CASE("telescope preserves a stationary tail only when the tail window survives") {
    BratteliDiagram od = odometer(2);
    // keeping {0, 2} squares the tail of a stationary diagram
    BratteliDiagram sq = od.telescope({0, 2});
    REQUIRE(sq.stationary());
    REQUIRE(sq.matrices().back() == Matrix<Int>{{Int(4)}});
    REQUIRE(sq.dims(5).values[0] == 1024);

    BratteliDiagram g = stationary_from_tail(tail_golden());
    BratteliDiagram gt = g.telescope({0, 2});
    REQUIRE(gt.stationary());
    REQUIRE(gt.matrices().back() == tail_golden() * tail_golden());

    // dropping every level past the root window yields a plain prefix
    BratteliDiagram pfx = pascal(4).telescope({0, 4});
    REQUIRE_FALSE(pfx.stationary());
}

TEST_CASE("uhf and odometer generators validate parameters") {
    REQUIRE_ERRC(uhf({}, false), Errc::BadParam);
    REQUIRE_ERRC(uhf({Int(2), Int(1)}, false), Errc::BadParam);
    REQUIRE_ERRC(odometer(Int(1)), Errc::BadParam);
    BratteliDiagram u = uhf({Int(2), Int(3)}, false);
    REQUIRE(u.prefix_levels() == 3);
    REQUIRE(u.dims(2).values[0] == 6);
    REQUIRE_FALSE(u.stationary());
    REQUIRE(uhf({Int(2), Int(3)}, true).stationary());
}
