// Golden mean walk-through: build the stationary diagram with tail
// [[1,1],[1,0]], print its canonical text form and invariants, then iterate
// the successor map over the depth-4 cylinder with exact measures.

#include <iostream>

#include <bratteli/bratteli.hpp>

using namespace bratteli;

int main() {
    Matrix<Int> tail(2, 2, Int(0));
    tail(0, 0) = 1;
    tail(0, 1) = 1;
    tail(1, 0) = 1;
    BratteliDiagram d = stationary_from_tail(tail);

    std::cout << serialize_bd(DiagramDocument::make(d)) << "\n";

    StationaryPresentation p = k0_presentation(d);
    InvariantReport r = stationary_invariants(p, 1e-12);
    std::cout << "char poly   " << poly_to_string(r.char_poly) << "\n";
    std::cout << "determinant " << r.determinant.str() << "\n";
    std::cout << "perron      " << r.perron << "  (golden ratio)\n\n";

    // the two level-1 cylinders carry 1/phi and 1/phi^2, exactly
    for (std::size_t v = 0; v < 2; ++v) {
        CylinderMeasure m = measure_at_vertex(d, 1, v);
        std::cout << "mu(1," << v << ") = " << exact_to_string(*m.exact) << " = " << m.value
                  << "\n";
    }
    std::cout << "\n";

    auto show = [](const PathWord& p) {
        for (std::size_t m = 0; m < p.edges.size(); ++m)
            std::cout << (m ? "," : "") << p.edges[m].source << '.' << p.edges[m].copy;
        std::cout << ':' << p.end_vertex;
    };

    OrderedBratteliDiagram od = OrderedBratteliDiagram::with_default(d);
    PathWord path = min_path(od, 4);
    for (int step = 0; step < 8; ++step) {
        CylinderMeasure m = stationary_measure(d, path);
        show(path);
        std::cout << "  mu " << exact_to_string(*m.exact) << "\n";
        path = successor(od, path);
    }
    return 0;
}
