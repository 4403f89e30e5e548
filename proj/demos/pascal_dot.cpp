// Emits the binomial diagram as DOT on stdout; render with
//   pascal_dot_demo | dot -Tsvg -o pascal.svg

#include <iostream>

#include <bratteli/bratteli.hpp>

int main() {
    bratteli::BratteliDiagram d = bratteli::pascal(5);
    bratteli::DotOptions opts;
    std::cout << bratteli::export_dot(d, opts);
    return 0;
}
