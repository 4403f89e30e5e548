// Acceptance gate: every core guarantee checked end to end, one line per
// check, nonzero exit when any of them fails.  Self-contained on purpose so
// the binary stays runnable without any test framework.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <bratteli/bratteli.hpp>

using namespace bratteli;

namespace {

struct CheckFailure {
    std::string detail;
};

void expect(bool ok, const std::string& detail) {
    if (!ok) throw CheckFailure{detail};
}

std::size_t pick(std::mt19937& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

BratteliDiagram random_diagram(std::mt19937& rng, std::size_t max_levels, std::size_t max_size,
                               std::size_t max_entry, bool allow_stationary) {
    std::size_t levels = pick(rng, 2, max_levels);
    bool stationary = allow_stationary && pick(rng, 0, 1) == 1;
    std::vector<std::size_t> sizes(levels);
    sizes[0] = 1;
    for (std::size_t n = 1; n < levels; ++n) sizes[n] = pick(rng, 1, max_size);
    if (stationary) sizes[levels - 1] = sizes[levels - 2];
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

std::vector<std::size_t> random_keep_full(std::mt19937& rng, std::size_t levels) {
    std::vector<std::size_t> keep{0};
    for (std::size_t n = 1; n + 1 < levels; ++n)
        if (pick(rng, 0, 1) == 1) keep.push_back(n);
    keep.push_back(levels - 1);
    return keep;
}

DiagramDocument random_document(std::mt19937& rng) {
    BratteliDiagram d = random_diagram(rng, 5, 4, 3, true);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> orders;
    for (std::size_t level = 1; level < d.prefix_levels(); ++level)
        for (std::size_t v = 0; v < d.level_size(level); ++v)
            if (pick(rng, 0, 2) == 0) {
                auto ord = OrderedBratteliDiagram::default_order_of(d, level, v);
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

Matrix<Int> from_rows(const std::vector<std::vector<long>>& rows) {
    Matrix<Int> m(rows.size(), rows[0].size(), Int(0));
    for (std::size_t j = 0; j < rows.size(); ++j)
        for (std::size_t i = 0; i < rows[j].size(); ++i) m(j, i) = Int(rows[j][i]);
    return m;
}

Int binomial(std::size_t n, std::size_t k) {
    if (k > n) return Int(0);
    if (k > n - k) k = n - k;
    Int r(1);
    for (std::size_t i = 1; i <= k; ++i) r = r * Int(n - k + i) / Int(i);
    return r;
}

std::size_t path_value(const PathWord& p, std::size_t base) {
    std::size_t v = 0, w = 1;
    for (const Edge& e : p.edges) {
        v += (e.copy - 1) * w;
        w *= base;
    }
    return v;
}

// 1. Exact dimension vectors of the binomial diagram are binomial rows.
void check_binomial_dims() {
    BratteliDiagram d = gicar(30);
    for (std::size_t n = 0; n <= 30; ++n) {
        DimensionVector dv = d.dims(n);
        expect(dv.values.size() == n + 1, "row " + std::to_string(n) + " has wrong length");
        for (std::size_t k = 0; k <= n; ++k)
            expect(dv.values[k] == binomial(n, k),
                   "dims(" + std::to_string(n) + ")[" + std::to_string(k) + "] != C(n,k)");
    }
    std::vector<Int> row4{Int(1), Int(4), Int(6), Int(4), Int(1)};
    expect(d.dims(4).values == row4, "row 4 is not 1 4 6 4 1");
}

// 2. The binomial generator's step matrices match the literal bidiagonals.
void check_pascal_matrices() {
    BratteliDiagram d = pascal(4);
    expect(d.matrices().size() == 4, "pascal(4) should store 4 step matrices");
    std::vector<Matrix<Int>> want{
        from_rows({{1}, {1}}),
        from_rows({{1, 0}, {1, 1}, {0, 1}}),
        from_rows({{1, 0, 0}, {1, 1, 0}, {0, 1, 1}, {0, 0, 1}}),
        from_rows({{1, 0, 0, 0}, {1, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 1}, {0, 0, 0, 1}}),
    };
    for (std::size_t n = 0; n < 4; ++n)
        expect(d.matrices()[n] == want[n], "step matrix " + std::to_string(n) + " differs");
}

// 3. Telescoping keeps the dimension vectors of every kept level.
void check_telescoping_dims() {
    std::mt19937 rng(1234);
    for (int t = 0; t < 1000; ++t) {
        BratteliDiagram d = random_diagram(rng, 6, 5, 4, true);
        std::vector<std::size_t> keep = random_keep_full(rng, d.prefix_levels());
        BratteliDiagram tel = d.telescope(keep);
        for (std::size_t i = 0; i < keep.size(); ++i)
            expect(tel.dims(i).values == d.dims(keep[i]).values,
                   "trial " + std::to_string(t) + ": dims changed at kept level " +
                       std::to_string(keep[i]));
    }
}

// 4. The base-b successor map is the +1 odometer on a single b^n cycle.
void check_odometer_cycles() {
    for (std::size_t b : {2u, 3u, 5u}) {
        OrderedBratteliDiagram od = OrderedBratteliDiagram::with_default(odometer(Int(b)));
        for (std::size_t n = 1;; ++n) {
            std::size_t total = 1;
            for (std::size_t i = 0; i < n; ++i) total *= b;
            if (total > 4096) break;
            PathWord p = min_path(od, n);
            for (std::size_t step = 0; step < total; ++step) {
                expect(path_value(p, b) == step, "base " + std::to_string(b) + " depth " +
                                                     std::to_string(n) + ": value mismatch at step " +
                                                     std::to_string(step));
                p = successor(od, p);
            }
            expect(p == min_path(od, n),
                   "base " + std::to_string(b) + " depth " + std::to_string(n) +
                       ": cycle did not close after b^n steps");
        }
    }
}

// 5. Witness search: found and verified across telescopes, found for the
//    reordered product factors, refuted for distinct odometers.
void check_equivalence() {
    std::mt19937 rng(99);
    for (int t = 0; t < 100; ++t) {
        BratteliDiagram d = random_diagram(rng, 5, 3, 3, false);
        BratteliDiagram tel = d.telescope(random_keep_full(rng, d.prefix_levels()));
        EquivalenceResult res = find_intertwining(d, tel, 4);
        expect(res.found, "trial " + std::to_string(t) + ": telescope witness not found");
        expect(verify_intertwining(d, tel, *res.witness),
               "trial " + std::to_string(t) + ": telescope witness failed verification");
    }

    BratteliDiagram a = uhf({Int(2), Int(3), Int(2), Int(3)}, false);
    BratteliDiagram b = uhf({Int(6), Int(6)}, false);
    EquivalenceResult res = find_intertwining(a, b, 4);
    expect(res.found, "2*3*2*3 vs 6*6 witness not found");
    expect(res.witness->equations() >= 2, "2*3*2*3 vs 6*6 witness closes too few equations");
    expect(verify_intertwining(a, b, *res.witness), "2*3*2*3 vs 6*6 witness failed verification");

    BratteliDiagram o2 = odometer(Int(2)), o3 = odometer(Int(3));
    Supernatural s2 = supernatural_invariant(o2), s3 = supernatural_invariant(o3);
    expect(!s2.lower_bound_only && !s3.lower_bound_only, "odometer profiles should be exact");
    expect(!(s2 == s3), "odometer 2 and 3 profiles should differ");
    expect(!find_intertwining(o2, o3, 8).found, "odometer 2 vs 3 witness should not exist");
}

// 6. Golden mean tail: integer invariants exact, Perron within 1e-12, and
//    the cylinder measures land in the quadratic field on the nose.
void check_golden_mean() {
    BratteliDiagram d = stationary_from_tail(from_rows({{1, 1}, {1, 0}}));
    StationaryPresentation p = k0_presentation(d);
    InvariantReport r = stationary_invariants(p, 1e-12);
    std::vector<Int> char_poly{Int(-1), Int(-1), Int(1)};
    expect(r.char_poly == char_poly, "characteristic polynomial is not x^2 - x - 1");
    expect(r.determinant == Int(-1), "determinant is not -1");
    expect(r.eventual_rank == 2, "eventual rank is not 2");
    expect(r.primitive, "tail should be primitive");
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    expect(std::abs(r.perron - phi) <= 1e-12, "Perron value misses the golden ratio");

    CylinderMeasure m0 = measure_at_vertex(d, 1, 0);
    CylinderMeasure m1 = measure_at_vertex(d, 1, 1);
    expect(m0.exact.has_value() && m1.exact.has_value(), "golden measures should be exact");
    expect(m0.tolerance == 0.0 && m1.tolerance == 0.0, "exact measures must carry tolerance 0");
    const Quad& q0 = std::get<Quad>(*m0.exact);
    const Quad& q1 = std::get<Quad>(*m1.exact);
    expect(q0 == Quad(Rat(-1, 2), Rat(1, 2), Int(5)), "mu(1,0) is not 1/phi");
    expect(q1 == Quad(Rat(3, 2), Rat(-1, 2), Int(5)), "mu(1,1) is not 1/phi^2");
    expect(q0 + q1 == Quad::from_rat(Rat(1), Int(5)), "level-1 measures do not add to 1");
}

// 7. Graph norms: A/D/E indices hit 4cos^2(pi/h) within 1e-9 and stay
//    below 4; D_n matches A_{2n-3}.
void check_dynkin_norms() {
    const double pi = std::acos(-1.0);
    for (std::size_t rank = 2; rank <= 11; ++rank) {
        NormResult nr = graph_norm(dynkin(DynkinType::A, rank));
        double want = 4.0 * std::pow(std::cos(pi / double(rank + 1)), 2);
        expect(std::abs(nr.index - want) <= 1e-9,
               "A rank " + std::to_string(rank) + " index misses 4cos^2(pi/(rank+1))");
        expect(nr.index < 4.0, "A rank " + std::to_string(rank) + " index not below 4");
    }
    for (std::size_t n = 4; n <= 8; ++n) {
        NormResult nd = graph_norm(dynkin(DynkinType::D, n));
        NormResult na = graph_norm(dynkin(DynkinType::A, 2 * n - 3));
        expect(std::abs(nd.norm - na.norm) <= 1e-9,
               "D rank " + std::to_string(n) + " norm differs from A rank " +
                   std::to_string(2 * n - 3));
        expect(nd.index < 4.0, "D rank " + std::to_string(n) + " index not below 4");
    }
    const std::pair<std::size_t, std::size_t> exceptional[] = {{6, 12}, {7, 18}, {8, 30}};
    for (auto [rank, h] : exceptional) {
        NormResult ne = graph_norm(dynkin(DynkinType::E, rank));
        double want = 4.0 * std::pow(std::cos(pi / double(h)), 2);
        expect(std::abs(ne.index - want) <= 1e-9,
               "E rank " + std::to_string(rank) + " index misses 4cos^2(pi/h)");
        expect(ne.index < 4.0, "E rank " + std::to_string(rank) + " index not below 4");
    }
}

// 8. Simplicity: primitive tails are Simple, a block-diagonal tail yields a
//    verified certificate, and a pure prefix stays undecided at its bound.
void check_simplicity() {
    expect(simplicity(odometer(Int(2)), 10).kind == SimplicityVerdict::Kind::Simple,
           "odometer should be Simple");
    BratteliDiagram golden = stationary_from_tail(from_rows({{1, 1}, {1, 0}}));
    expect(simplicity(golden, 10).kind == SimplicityVerdict::Kind::Simple,
           "golden mean tail should be Simple");

    BratteliDiagram blocks = stationary_from_tail(from_rows({{2, 0}, {0, 3}}));
    SimplicityVerdict v = simplicity(blocks, 10);
    expect(v.kind == SimplicityVerdict::Kind::NotSimple, "block-diagonal tail should be NotSimple");
    expect(v.certificate.has_value(), "NotSimple verdict must carry a certificate");
    expect(verify_not_simple(blocks, *v.certificate), "certificate failed verification");

    SimplicityVerdict u = simplicity(pascal(20), 20);
    expect(u.kind == SimplicityVerdict::Kind::UnknownAtBound,
           "pure prefix should be UnknownAtBound");
    expect(u.depth == 20, "examined depth should be 20");
}

// 9. Serialization round trips: parse(serialize(doc)) == doc and the bytes
//    are a fixed point, for generator output and 500 random documents.
void check_round_trips() {
    std::vector<DiagramDocument> docs;
    docs.push_back(DiagramDocument::make(pascal(4)));
    docs.push_back(DiagramDocument::make(gicar(3)));
    docs.push_back(DiagramDocument::make(uhf({Int(2), Int(3), Int(4)}, false)));
    docs.push_back(DiagramDocument::make(uhf({Int(2), Int(3)}, true)));
    docs.push_back(DiagramDocument::make(odometer(Int(5))));
    docs.push_back(DiagramDocument::make(stationary_from_tail(from_rows({{1, 1}, {1, 0}}))));
    docs.push_back(DiagramDocument::make(tower_diagram(dynkin(DynkinType::E, 6), 6).diagram));
    std::mt19937 rng(7);
    for (int t = 0; t < 500; ++t) docs.push_back(random_document(rng));
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::string s = serialize_bd(docs[i]);
        DiagramDocument parsed = parse_bd(s);
        expect(parsed == docs[i], "document " + std::to_string(i) + " changed across a round trip");
        expect(serialize_bd(parsed) == s,
               "document " + std::to_string(i) + " serialization is not byte-stable");
    }
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = untimed
    std::function<void()> body;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "binomial dimension vectors", 1.0, check_binomial_dims},
        {2, "hardcoded bidiagonal step matrices", 0.0, check_pascal_matrices},
        {3, "telescoping dimension invariance (1000 trials)", 10.0, check_telescoping_dims},
        {4, "odometer successor cycles (b^n <= 4096)", 5.0, check_odometer_cycles},
        {5, "intertwining witnesses found, verified, refuted", 0.0, check_equivalence},
        {6, "golden mean invariants and exact measures", 0.0, check_golden_mean},
        {7, "Dynkin graph norms and indices", 0.0, check_dynkin_norms},
        {8, "simplicity verdicts with certificates", 0.0, check_simplicity},
        {9, "serialization round trips (500 random)", 0.0, check_round_trips},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            c.body();
        } catch (const CheckFailure& f) {
            ok = false;
            detail = f.detail;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("unexpected exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && c.budget_seconds > 0 && secs > c.budget_seconds) {
            ok = false;
            detail = "exceeded time budget of " + std::to_string(c.budget_seconds) + "s";
        }
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name;
        std::string text = line.str();
        if (text.size() < 60) text.append(60 - text.size(), ' ');
        std::printf("%s %7.3fs", text.c_str(), secs);
        if (c.budget_seconds > 0) std::printf("  (budget %.0fs)", c.budget_seconds);
        if (!ok) std::printf("  %s", detail.c_str());
        std::printf("\n");
        if (!ok) ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
