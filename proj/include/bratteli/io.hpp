#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "vershik.hpp"

namespace bratteli {

/// Fixed orientation line emitted at the top of every serialized document.
inline const char* bd_orientation_comment() {
    return "matrix row j under 'matrix n' counts edges into vertex j of level n+1; "
           "column i counts those from vertex i of level n";
}

/// A parsed .bd document: the diagram, explicitly listed (non-default) edge
/// orders keyed by (level, vertex), and user comment lines.
struct DiagramDocument {
    BratteliDiagram diagram;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> orders;
    std::vector<std::string> comments;

    /// Normalizing factory: orders equal to the default lexicographic one
    /// are dropped so equal documents serialize identically.
    static DiagramDocument make(
        BratteliDiagram d,
        std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> orders = {},
        std::vector<std::string> comments = {}) {
        for (auto it = orders.begin(); it != orders.end();) {
            auto [level, vertex] = it->first;
            if (it->second == OrderedBratteliDiagram::default_order_of(d, level, vertex))
                it = orders.erase(it);
            else
                ++it;
        }
        return DiagramDocument{std::move(d), std::move(orders), std::move(comments)};
    }

    OrderedBratteliDiagram ordered() const {
        return OrderedBratteliDiagram::with_orders(diagram, orders);
    }

    bool operator==(const DiagramDocument&) const = default;
};

namespace detail {

struct BdLine {
    std::size_t number = 0;  // 1-based
    std::string text;        // comment-stripped, untrimmed
};

struct Token {
    std::string text;
    std::size_t column = 0;  // 1-based
};

inline std::vector<Token> tokenize(const BdLine& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.text.size()) {
        if (line.text[i] == ' ' || line.text[i] == '\t') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.text.size() && line.text[i] != ' ' && line.text[i] != '\t') ++i;
        out.push_back(Token{line.text.substr(start, i - start), start + 1});
    }
    return out;
}

inline Int parse_uint(const Token& tok, std::size_t line) {
    if (tok.text.empty() || tok.text.find_first_not_of("0123456789") != std::string::npos)
        throw Error(Errc::ParseError, "expected a non-negative integer, got '" + tok.text + "'",
                    line, tok.column);
    return Int(tok.text);
}

inline std::size_t parse_index(const Token& tok, std::size_t line) {
    Int v = parse_uint(tok, line);
    if (v > Int(1000000000))
        throw Error(Errc::ParseError, "index too large", line, tok.column);
    return static_cast<std::size_t>(v);
}

}  // namespace detail

/// Parses the line-oriented .bd format.  Full-line '#' comments are
/// collected into the document (except the fixed orientation line); inline
/// '#' starts a discardable trailing comment.  All reported errors carry a
/// 1-based line and column.
inline DiagramDocument parse_bd(const std::string& text) {
    using detail::BdLine;
    using detail::Token;

    std::vector<BdLine> lines;
    std::vector<std::string> comments;
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string raw = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
            pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
            ++line_no;
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            std::size_t first = raw.find_first_not_of(" \t");
            if (first != std::string::npos && raw[first] == '#') {
                std::string body = raw.substr(first + 1);
                if (!body.empty() && body.front() == ' ') body.erase(0, 1);
                if (body != bd_orientation_comment()) comments.push_back(body);
                continue;
            }
            std::size_t hash = raw.find('#');
            if (hash != std::string::npos) raw.resize(hash);
            if (raw.find_first_not_of(" \t") == std::string::npos) continue;
            lines.push_back(BdLine{line_no, raw});
        }
    }

    if (lines.empty()) throw Error(Errc::ParseError, "empty document", 1, 1);
    std::size_t cursor = 0;
    auto need_line = [&](const char* what) -> const BdLine& {
        if (cursor >= lines.size())
            throw Error(Errc::ParseError, std::string("unexpected end of document, expected ") + what,
                        lines.back().number, 1);
        return lines[cursor];
    };

    // header
    {
        const BdLine& l = need_line("'bratteli v1'");
        auto toks = detail::tokenize(l);
        if (toks.size() != 2 || toks[0].text != "bratteli" || toks[1].text != "v1")
            throw Error(Errc::ParseError, "expected 'bratteli v1'", l.number, toks[0].column);
        ++cursor;
    }

    // levels
    std::size_t level_count = 0;
    std::size_t levels_line = 0;
    {
        const BdLine& l = need_line("'levels L'");
        auto toks = detail::tokenize(l);
        if (toks.size() != 2 || toks[0].text != "levels")
            throw Error(Errc::ParseError, "expected 'levels L'", l.number, toks[0].column);
        level_count = detail::parse_index(toks[1], l.number);
        levels_line = l.number;
        if (level_count < 1)
            throw Error(Errc::EmptyDiagram, "a diagram needs at least one level", l.number,
                        toks[1].column);
        ++cursor;
    }

    // sizes
    std::vector<std::size_t> sizes;
    {
        const BdLine& l = need_line("'sizes ...'");
        auto toks = detail::tokenize(l);
        if (toks.empty() || toks[0].text != "sizes")
            throw Error(Errc::ParseError, "expected 'sizes ...'", l.number,
                        toks.empty() ? 1 : toks[0].column);
        if (toks.size() != level_count + 1)
            throw Error(Errc::ParseError,
                        "expected " + std::to_string(level_count) + " sizes, got " +
                            std::to_string(toks.size() - 1),
                        l.number, toks.size() > 1 ? toks.back().column : toks[0].column);
        for (std::size_t i = 1; i < toks.size(); ++i) {
            std::size_t k = detail::parse_index(toks[i], l.number);
            if (k == 0)
                throw Error(Errc::EmptyDiagram, "level " + std::to_string(i - 1) + " is empty",
                            l.number, toks[i].column);
            sizes.push_back(k);
        }
        if (sizes[0] != 1)
            throw Error(Errc::NonUnitalRoot, "the root level must have exactly one vertex",
                        l.number, toks[1].column);
        ++cursor;
        (void)levels_line;
    }

    // matrices
    std::vector<Matrix<Int>> matrices;
    for (std::size_t n = 0; n + 1 < level_count; ++n) {
        const BdLine& header = need_line(("'matrix " + std::to_string(n) + "'").c_str());
        auto toks = detail::tokenize(header);
        if (toks.size() != 2 || toks[0].text != "matrix")
            throw Error(Errc::ParseError, "expected 'matrix " + std::to_string(n) + "'",
                        header.number, toks[0].column);
        if (detail::parse_index(toks[1], header.number) != n)
            throw Error(Errc::ParseError, "matrices must appear in order, expected 'matrix " +
                                              std::to_string(n) + "'",
                        header.number, toks[1].column);
        ++cursor;
        Matrix<Int> m(sizes[n + 1], sizes[n], Int(0));
        for (std::size_t j = 0; j < sizes[n + 1]; ++j) {
            if (cursor >= lines.size())
                throw Error(Errc::ShapeMismatch,
                            "matrix " + std::to_string(n) + " needs " +
                                std::to_string(sizes[n + 1]) + " rows",
                            header.number, 1);
            const BdLine& row = lines[cursor];
            auto rtoks = detail::tokenize(row);
            if (!rtoks[0].text.empty() && !std::isdigit(static_cast<unsigned char>(rtoks[0].text[0])))
                throw Error(Errc::ShapeMismatch,
                            "matrix " + std::to_string(n) + " needs " +
                                std::to_string(sizes[n + 1]) + " rows, got " + std::to_string(j),
                            row.number, rtoks[0].column);
            if (rtoks.size() != sizes[n])
                throw Error(Errc::ShapeMismatch,
                            "matrix " + std::to_string(n) + " row " + std::to_string(j) +
                                " needs " + std::to_string(sizes[n]) + " entries, got " +
                                std::to_string(rtoks.size()),
                            row.number, rtoks.back().column);
            bool all_zero = true;
            for (std::size_t i = 0; i < sizes[n]; ++i) {
                m(j, i) = detail::parse_uint(rtoks[i], row.number);
                if (m(j, i) != 0) all_zero = false;
            }
            if (all_zero)
                throw Error(Errc::ZeroRow,
                            "vertex " + std::to_string(j) + " of level " + std::to_string(n + 1) +
                                " has no incoming edges",
                            row.number, rtoks[0].column);
            ++cursor;
        }
        // a further numeric row would silently change the matrix shape
        if (cursor < lines.size()) {
            auto next = detail::tokenize(lines[cursor]);
            if (!next.empty() && std::isdigit(static_cast<unsigned char>(next[0].text[0])))
                throw Error(Errc::ShapeMismatch,
                            "matrix " + std::to_string(n) + " has more than " +
                                std::to_string(sizes[n + 1]) + " rows",
                            lines[cursor].number, next[0].column);
        }
        matrices.push_back(std::move(m));
    }

    // optional stationary, then order lines
    bool stationary = false;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Edge>> orders;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> order_lines;
    for (; cursor < lines.size(); ++cursor) {
        const BdLine& l = lines[cursor];
        auto toks = detail::tokenize(l);
        if (toks[0].text == "stationary") {
            if (stationary)
                throw Error(Errc::ParseError, "duplicate 'stationary'", l.number, toks[0].column);
            if (!orders.empty())
                throw Error(Errc::ParseError, "'stationary' must precede order lines", l.number,
                            toks[0].column);
            if (toks.size() != 1)
                throw Error(Errc::ParseError, "'stationary' takes no arguments", l.number,
                            toks[1].column);
            if (matrices.empty())
                throw Error(Errc::NonSquareTail, "a stationary diagram needs a tail matrix",
                            l.number, toks[0].column);
            if (!matrices.back().is_square())
                throw Error(Errc::NonSquareTail,
                            "the repeating tail matrix must be square, got " +
                                std::to_string(matrices.back().rows()) + "x" +
                                std::to_string(matrices.back().cols()),
                            l.number, toks[0].column);
            stationary = true;
            continue;
        }
        if (toks[0].text == "order") {
            // order n j: i.t i.t ...
            if (toks.size() < 4)
                throw Error(Errc::ParseError, "expected 'order n j: i.t ...'", l.number,
                            toks[0].column);
            Token jtok = toks[2];
            bool colon_attached = !jtok.text.empty() && jtok.text.back() == ':';
            std::size_t first_edge = 3;
            if (colon_attached) {
                jtok.text.pop_back();
            } else {
                if (toks[3].text != ":")
                    throw Error(Errc::ParseError, "expected ':' after the vertex index", l.number,
                                toks[3].column);
                first_edge = 4;
            }
            std::size_t n = detail::parse_index(toks[1], l.number);
            std::size_t j = detail::parse_index(jtok, l.number);
            if (n < 1 || n >= level_count)
                throw Error(Errc::LevelOutOfRange,
                            "order level must lie in [1, " + std::to_string(level_count - 1) + "]",
                            l.number, toks[1].column);
            if (j >= sizes[n])
                throw Error(Errc::InvalidOrder, "vertex " + std::to_string(j) +
                                                    " out of range at level " + std::to_string(n),
                            l.number, jtok.column);
            if (orders.count({n, j}))
                throw Error(Errc::ParseError, "duplicate order for vertex " + std::to_string(j) +
                                                  " at level " + std::to_string(n),
                            l.number, toks[0].column);
            std::vector<Edge> ord;
            for (std::size_t t = first_edge; t < toks.size(); ++t) {
                std::size_t dot = toks[t].text.find('.');
                if (dot == std::string::npos)
                    throw Error(Errc::ParseError, "expected edge token 'source.copy', got '" +
                                                      toks[t].text + "'",
                                l.number, toks[t].column);
                Token src{toks[t].text.substr(0, dot), toks[t].column};
                Token cpy{toks[t].text.substr(dot + 1), toks[t].column + dot + 1};
                Edge e;
                e.source = detail::parse_index(src, l.number);
                e.copy = detail::parse_index(cpy, l.number);
                if (e.copy < 1)
                    throw Error(Errc::ParseError, "edge copy indices are 1-based", l.number,
                                cpy.column);
                ord.push_back(e);
            }
            orders[{n, j}] = std::move(ord);
            order_lines[{n, j}] = l.number;
            continue;
        }
        throw Error(Errc::ParseError, "unknown directive '" + toks[0].text + "'", l.number,
                    toks[0].column);
    }

    BratteliDiagram diagram = BratteliDiagram::validate(sizes, matrices, stationary);

    // order lines must be permutations of the incoming multiset; recheck with
    // line positions before handing off to the document
    for (const auto& [key, ord] : orders) {
        std::vector<Edge> def = OrderedBratteliDiagram::default_order_of(diagram, key.first,
                                                                         key.second);
        std::vector<Edge> sorted = ord;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != def)
            throw Error(Errc::InvalidOrder,
                        "order for vertex " + std::to_string(key.second) + " at level " +
                            std::to_string(key.first) +
                            " is not a permutation of the incoming edge multiset",
                        order_lines.at(key), 1);
    }

    return DiagramDocument::make(std::move(diagram), std::move(orders), std::move(comments));
}

/// Canonical serialization: orientation comment, user comments, body with
/// single spaces and LF endings, non-default orders sorted by (level, vertex).
inline std::string serialize_bd(const DiagramDocument& doc) {
    std::ostringstream os;
    os << "# " << bd_orientation_comment() << "\n";
    for (const std::string& c : doc.comments) {
        if (c.empty())
            os << "#\n";
        else
            os << "# " << c << "\n";
    }
    const BratteliDiagram& d = doc.diagram;
    os << "bratteli v1\n";
    os << "levels " << d.prefix_levels() << "\n";
    os << "sizes";
    for (std::size_t k : d.sizes()) os << ' ' << k;
    os << "\n";
    for (std::size_t n = 0; n < d.matrices().size(); ++n) {
        os << "matrix " << n << "\n";
        const Matrix<Int>& m = d.matrices()[n];
        for (std::size_t j = 0; j < m.rows(); ++j) {
            for (std::size_t i = 0; i < m.cols(); ++i) {
                if (i) os << ' ';
                os << m(j, i).str();
            }
            os << "\n";
        }
    }
    if (d.stationary()) os << "stationary\n";
    for (const auto& [key, ord] : doc.orders) {
        os << "order " << key.first << ' ' << key.second << ':';
        for (const Edge& e : ord) os << ' ' << e.source << '.' << e.copy;
        os << "\n";
    }
    return os.str();
}

/// DOT export options: depth caps how many levels are drawn (mandatory cap
/// for stationary tails, defaulting to the stored prefix), expand draws
/// parallel edges individually instead of one labeled edge.
struct DotOptions {
    std::optional<std::size_t> depth;
    bool expand = false;
};

inline std::string export_dot(const BratteliDiagram& d, const DotOptions& options = {}) {
    std::size_t depth = options.depth.value_or(d.prefix_levels() - 1);
    std::ostringstream os;
    os << "digraph bratteli {\n";
    os << "  rankdir=TB;\n";
    os << "  node [shape=circle];\n";
    for (std::size_t n = 0; n <= depth; ++n) {
        DimensionVector dims = d.dims(n);
        for (std::size_t v = 0; v < d.level_size(n); ++v)
            os << "  L" << n << "_" << v << " [label=\"" << dims.values[v].str() << "\"];\n";
    }
    for (std::size_t n = 0; n <= depth; ++n) {
        os << "  { rank=same;";
        for (std::size_t v = 0; v < d.level_size(n); ++v) os << " L" << n << "_" << v << ";";
        os << " }\n";
    }
    for (std::size_t n = 0; n < depth; ++n) {
        const Matrix<Int>& m = d.step_matrix(n);
        for (std::size_t i = 0; i < m.cols(); ++i)
            for (std::size_t j = 0; j < m.rows(); ++j) {
                if (m(j, i) == 0) continue;
                if (options.expand) {
                    for (Int t = 0; t < m(j, i); ++t)
                        os << "  L" << n << "_" << i << " -> L" << n + 1 << "_" << j << ";\n";
                } else {
                    os << "  L" << n << "_" << i << " -> L" << n + 1 << "_" << j;
                    if (m(j, i) > 1) os << " [label=\"" << m(j, i).str() << "\"]";
                    os << ";\n";
                }
            }
    }
    os << "}\n";
    return os.str();
}

}  // namespace bratteli
