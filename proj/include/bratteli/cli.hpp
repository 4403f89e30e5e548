#pragma once

#include <cstddef>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bigint.hpp"
#include "diagram.hpp"
#include "dimension_group.hpp"
#include "equivalence.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "matrix.hpp"
#include "simplicity.hpp"
#include "towers.hpp"
#include "vershik.hpp"

namespace bratteli {

/// Path text form: comma-separated "source.copy" edge tokens, then ':' and
/// the end vertex; the empty path at the root of level v is ":v".
inline std::string path_to_string(const PathWord& p) {
    std::ostringstream os;
    for (std::size_t m = 0; m < p.edges.size(); ++m) {
        if (m) os << ',';
        os << p.edges[m].source << '.' << p.edges[m].copy;
    }
    os << ':' << p.end_vertex;
    return os.str();
}

inline PathWord parse_path(const std::string& text) {
    std::size_t colon = text.rfind(':');
    if (colon == std::string::npos)
        throw Error(Errc::ParseError, "path needs ':end_vertex', got '" + text + "'");
    PathWord p;
    std::string tail = text.substr(colon + 1);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
        throw Error(Errc::ParseError, "bad end vertex '" + tail + "'");
    p.end_vertex = std::stoul(tail);
    std::string head = text.substr(0, colon);
    std::size_t pos = 0;
    while (pos < head.size()) {
        std::size_t comma = head.find(',', pos);
        std::string tok = head.substr(pos, comma == std::string::npos ? comma : comma - pos);
        pos = comma == std::string::npos ? head.size() : comma + 1;
        std::size_t dot = tok.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == tok.size() ||
            tok.find_first_not_of("0123456789.") != std::string::npos ||
            tok.find('.', dot + 1) != std::string::npos)
            throw Error(Errc::ParseError, "bad edge token '" + tok + "', expected 'source.copy'");
        Edge e;
        e.source = std::stoul(tok.substr(0, dot));
        e.copy = std::stoul(tok.substr(dot + 1));
        p.edges.push_back(e);
    }
    return p;
}

namespace cli_detail {

using json = nlohmann::ordered_json;

inline std::string fixed(double v, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

inline std::size_t parse_size(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw Error(Errc::BadParam, "bad " + what + " '" + s + "'");
    return std::stoul(s);
}

inline DynkinType parse_dynkin_type(const std::string& s) {
    if (s == "A" || s == "a") return DynkinType::A;
    if (s == "D" || s == "d") return DynkinType::D;
    if (s == "E" || s == "e") return DynkinType::E;
    throw Error(Errc::BadParam, "Dynkin type must be A, D, or E, got '" + s + "'");
}

/// Builds a generator's document from "kind" and a parameter string.  The
/// parameter string uses ',' between numbers, ';' between matrix rows, and
/// ':' before modifiers (uhf accepts the modifier "finite").
inline DiagramDocument run_generator(const std::string& kind, const std::string& params) {
    auto fields = split(params, ':');
    const std::string& head = fields[0];
    if (kind == "pascal" || kind == "gicar") {
        if (fields.size() != 1) throw Error(Errc::BadParam, kind + " takes one parameter");
        return DiagramDocument::make(pascal(parse_size(head, "depth")));
    }
    if (kind == "uhf") {
        bool stationary = true;
        if (fields.size() == 2 && fields[1] == "finite")
            stationary = false;
        else if (fields.size() != 1)
            throw Error(Errc::BadParam, "uhf takes factors and an optional ':finite'");
        std::vector<Int> factors;
        for (const std::string& f : fields[0].empty() ? std::vector<std::string>{} : split(head, ','))
            factors.push_back(Int(parse_size(f, "factor")));
        return DiagramDocument::make(uhf(factors, stationary));
    }
    if (kind == "odometer") {
        if (fields.size() != 1) throw Error(Errc::BadParam, "odometer takes one base");
        return DiagramDocument::make(odometer(Int(parse_size(head, "base"))));
    }
    if (kind == "stationary") {
        if (fields.size() != 1)
            throw Error(Errc::BadParam, "stationary takes semicolon-separated matrix rows");
        std::vector<std::vector<Int>> rows;
        for (const std::string& row : split(head, ';')) {
            std::vector<Int> r;
            for (const std::string& e : split(row, ',')) r.push_back(Int(parse_size(e, "entry")));
            rows.push_back(std::move(r));
        }
        std::size_t k = rows.size();
        Matrix<Int> tail(k, k, Int(0));
        for (std::size_t j = 0; j < k; ++j) {
            if (rows[j].size() != k)
                throw Error(Errc::BadParam, "tail matrix must be square, row " + std::to_string(j) +
                                                " has " + std::to_string(rows[j].size()) +
                                                " entries for " + std::to_string(k) + " rows");
            for (std::size_t i = 0; i < k; ++i) tail(j, i) = rows[j][i];
        }
        return DiagramDocument::make(stationary_from_tail(tail));
    }
    if (kind == "dynkin_tower") {
        auto parts = split(head, ',');
        if (fields.size() != 1 || parts.size() != 3)
            throw Error(Errc::BadParam, "dynkin_tower takes TYPE,RANK,DEPTH");
        MarkedGraph g = dynkin(parse_dynkin_type(parts[0]), parse_size(parts[1], "rank"));
        return DiagramDocument::make(tower_diagram(g, parse_size(parts[2], "depth")).diagram);
    }
    throw Error(Errc::BadParam, "unknown generator '" + kind + "'");
}

/// Loads a positional input: "gen:kind:params" inline generators, "-" for
/// standard input, otherwise a file path.
inline DiagramDocument load_document(const std::string& arg) {
    if (arg.rfind("gen:", 0) == 0) {
        std::string rest = arg.substr(4);
        std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw Error(Errc::BadParam, "inline generator needs 'gen:kind:params'");
        return run_generator(rest.substr(0, colon), rest.substr(colon + 1));
    }
    std::string text;
    if (arg == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        std::ifstream in(arg, std::ios::binary);
        if (!in) throw Error(Errc::ParseError, "cannot read '" + arg + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_bd(text);
}

inline void emit_text(std::ostream& out, const std::string& text,
                      const std::optional<std::string>& out_path) {
    if (!out_path) {
        out << text;
        return;
    }
    std::ofstream f(*out_path, std::ios::binary);
    if (!f) throw Error(Errc::BadParam, "cannot write '" + *out_path + "'");
    f << text;
}

inline json matrix_to_json(const Matrix<Int>& m) {
    json rows = json::array();
    for (std::size_t j = 0; j < m.rows(); ++j) {
        json row = json::array();
        for (std::size_t i = 0; i < m.cols(); ++i) row.push_back(m(j, i).str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json int_vector_to_json(const std::vector<Int>& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(x.str());
    return a;
}

inline std::string matrix_lines(const Matrix<Int>& m) {
    std::ostringstream os;
    for (std::size_t j = 0; j < m.rows(); ++j) {
        for (std::size_t i = 0; i < m.cols(); ++i) {
            if (i) os << ' ';
            os << m(j, i).str();
        }
        os << '\n';
    }
    return os.str();
}

inline json measure_to_json(const CylinderMeasure& m) {
    json j;
    j["exact"] = m.exact ? json(exact_to_string(*m.exact)) : json(nullptr);
    j["value"] = m.value;
    j["tolerance"] = m.tolerance;
    return j;
}

inline std::string measure_text(const CylinderMeasure& m) {
    return (m.exact ? exact_to_string(*m.exact) : std::string("~")) + " " + fixed(m.value, 10);
}

}  // namespace cli_detail

/// Runs one CLI invocation; args excludes the program name.  Exit codes:
/// 0/1/2 subcommand semantics, 64 usage, 65 parse or validation error,
/// 70 internal failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using cli_detail::fixed;
    using cli_detail::json;

    CLI::App app{"Bratteli diagram toolkit"};
    app.require_subcommand(1);

    // dims
    auto* dims_cmd = app.add_subcommand("dims", "print the exact dimension vector of a level");
    std::string dims_file;
    std::size_t dims_level = 0;
    bool dims_json = false;
    dims_cmd->add_option("FILE", dims_file, "diagram file, '-', or gen:kind:params")->required();
    dims_cmd->add_option("--level", dims_level, "level to report")->required();
    dims_cmd->add_flag("--json", dims_json, "emit one JSON object");

    // telescope
    auto* tel_cmd = app.add_subcommand("telescope", "telescope a diagram to kept levels");
    std::string tel_file, tel_keep;
    std::optional<std::string> tel_out;
    bool tel_json = false;
    tel_cmd->add_option("FILE", tel_file, "diagram input")->required();
    tel_cmd->add_option("--keep", tel_keep, "comma-separated kept levels, e.g. 0,2,5")->required();
    tel_cmd->add_option("-o,--output", tel_out, "write the result to a file");
    tel_cmd->add_flag("--json", tel_json, "emit one JSON object");

    // simple
    auto* simple_cmd = app.add_subcommand("simple", "decide simplicity up to a depth bound");
    std::string simple_file;
    std::size_t simple_bound = 10;
    bool simple_json = false;
    simple_cmd->add_option("FILE", simple_file, "diagram input")->required();
    simple_cmd->add_option("--bound", simple_bound, "depth bound for prefix verdicts");
    simple_cmd->add_flag("--json", simple_json, "emit one JSON object");

    // equiv
    auto* equiv_cmd = app.add_subcommand("equiv", "search for an intertwining witness");
    std::string equiv_a, equiv_b;
    std::size_t equiv_bound = 4;
    bool equiv_json = false;
    equiv_cmd->add_option("FILE1", equiv_a, "first diagram")->required();
    equiv_cmd->add_option("FILE2", equiv_b, "second diagram")->required();
    equiv_cmd->add_option("--bound", equiv_bound, "maximum closed equations");
    equiv_cmd->add_flag("--json", equiv_json, "emit one JSON object");

    // k0
    auto* k0_cmd = app.add_subcommand("k0", "stationary presentation and invariant report");
    std::string k0_file;
    double k0_tolerance = 1e-12;
    bool k0_json = false;
    k0_cmd->add_option("FILE", k0_file, "diagram input")->required();
    k0_cmd->add_option("--tolerance", k0_tolerance, "Perron bracket width");
    k0_cmd->add_flag("--json", k0_json, "emit one JSON object");

    // vershik
    auto* ver_cmd = app.add_subcommand("vershik", "iterate the adic successor map");
    std::string ver_file, ver_start = "min";
    std::size_t ver_depth = 0, ver_steps = 0;
    bool ver_measure = false, ver_json = false;
    ver_cmd->add_option("FILE", ver_file, "diagram input")->required();
    ver_cmd->add_option("--depth", ver_depth, "path depth (>= 1)")->required();
    ver_cmd->add_option("--start", ver_start, "min, max, or a path like 0.1,0.2:0");
    ver_cmd->add_option("--steps", ver_steps, "successor steps to take")->required();
    ver_cmd->add_flag("--measure", ver_measure, "append the cylinder measure per path");
    ver_cmd->add_flag("--json", ver_json, "emit one JSON object");

    // tower
    auto* tower_cmd = app.add_subcommand("tower", "Bratteli diagram of a Dynkin tower");
    std::string tower_type;
    std::size_t tower_rank = 0, tower_depth = 0;
    std::optional<std::size_t> tower_start;
    std::optional<std::string> tower_out;
    bool tower_json = false;
    tower_cmd->add_option("--type", tower_type, "A, D, or E")->required();
    tower_cmd->add_option("--rank", tower_rank, "number of vertices")->required();
    tower_cmd->add_option("--depth", tower_depth, "tower depth (>= 1)")->required();
    tower_cmd->add_option("--start", tower_start, "start vertex (default 0)");
    tower_cmd->add_option("-o,--output", tower_out, "write the result to a file");
    tower_cmd->add_flag("--json", tower_json, "emit one JSON object");

    // norm
    auto* norm_cmd = app.add_subcommand("norm", "graph norm and index of a Dynkin diagram");
    std::string norm_type;
    std::size_t norm_rank = 0;
    double norm_tolerance = 1e-10;
    bool norm_json = false;
    norm_cmd->add_option("--type", norm_type, "A, D, or E")->required();
    norm_cmd->add_option("--rank", norm_rank, "number of vertices")->required();
    norm_cmd->add_option("--tolerance", norm_tolerance, "bracket width");
    norm_cmd->add_flag("--json", norm_json, "emit one JSON object");

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "write a generator's diagram");
    std::string gen_kind, gen_params;
    std::optional<std::string> gen_out;
    bool gen_json = false;
    gen_cmd->add_option("KIND", gen_kind, "pascal|gicar|uhf|odometer|stationary|dynkin_tower")
        ->required();
    gen_cmd->add_option("PARAMS", gen_params, "generator parameters, e.g. 2,3 or 1,1;1,0")
        ->required();
    gen_cmd->add_option("-o,--output", gen_out, "write the result to a file");
    gen_cmd->add_flag("--json", gen_json, "emit one JSON object");

    // dot
    auto* dot_cmd = app.add_subcommand("dot", "export a diagram to DOT");
    std::string dot_file;
    std::optional<std::size_t> dot_depth;
    std::optional<std::string> dot_out;
    bool dot_expand = false, dot_json = false;
    dot_cmd->add_option("FILE", dot_file, "diagram input")->required();
    dot_cmd->add_option("--depth", dot_depth, "levels to draw (default: the stored prefix)");
    dot_cmd->add_flag("--expand", dot_expand, "draw parallel edges individually");
    dot_cmd->add_option("-o,--output", dot_out, "write the result to a file");
    dot_cmd->add_flag("--json", dot_json, "emit one JSON object");

    // fmt
    auto* fmt_cmd = app.add_subcommand("fmt", "canonical re-serialization");
    std::string fmt_file;
    std::optional<std::string> fmt_out;
    bool fmt_json = false;
    fmt_cmd->add_option("FILE", fmt_file, "diagram input")->required();
    fmt_cmd->add_option("-o,--output", fmt_out, "write the result to a file");
    fmt_cmd->add_flag("--json", fmt_json, "emit one JSON object");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    }

    try {
        if (app.got_subcommand(dims_cmd)) {
            DiagramDocument doc = cli_detail::load_document(dims_file);
            DimensionVector dv = doc.diagram.dims(dims_level);
            if (dims_json) {
                json j;
                j["level"] = dims_level;
                j["dims"] = cli_detail::int_vector_to_json(dv.values);
                j["total"] = dv.total().str();
                out << j.dump(2) << "\n";
            } else {
                for (std::size_t i = 0; i < dv.values.size(); ++i)
                    out << (i ? " " : "") << dv.values[i].str();
                out << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(tel_cmd)) {
            DiagramDocument doc = cli_detail::load_document(tel_file);
            std::vector<std::size_t> keep;
            for (const std::string& t : cli_detail::split(tel_keep, ','))
                keep.push_back(cli_detail::parse_size(t, "kept level"));
            BratteliDiagram result = doc.diagram.telescope(keep);
            std::string text = serialize_bd(DiagramDocument::make(std::move(result)));
            if (tel_json) {
                json j;
                j["bd"] = text;
                out << j.dump(2) << "\n";
            } else {
                cli_detail::emit_text(out, text, tel_out);
            }
            return 0;
        }

        if (app.got_subcommand(simple_cmd)) {
            DiagramDocument doc = cli_detail::load_document(simple_file);
            SimplicityVerdict v = simplicity(doc.diagram, simple_bound);
            const char* name = v.kind == SimplicityVerdict::Kind::Simple ? "Simple"
                               : v.kind == SimplicityVerdict::Kind::NotSimple
                                   ? "NotSimple"
                                   : "UnknownAtBound";
            if (simple_json) {
                json j;
                j["verdict"] = name;
                if (v.certificate) {
                    json c;
                    c["level"] = v.certificate->level;
                    c["vertices"] = v.certificate->vertices;
                    j["certificate"] = c;
                } else {
                    j["certificate"] = nullptr;
                }
                j["depth"] = v.kind == SimplicityVerdict::Kind::UnknownAtBound ? json(v.depth)
                                                                               : json(nullptr);
                out << j.dump(2) << "\n";
            } else {
                out << "verdict " << name << "\n";
                if (v.certificate) {
                    out << "certificate level " << v.certificate->level << " vertices";
                    for (std::size_t u : v.certificate->vertices) out << ' ' << u;
                    out << "\n";
                }
                if (v.kind == SimplicityVerdict::Kind::UnknownAtBound)
                    out << "depth " << v.depth << "\n";
            }
            switch (v.kind) {
                case SimplicityVerdict::Kind::Simple: return 0;
                case SimplicityVerdict::Kind::NotSimple: return 1;
                case SimplicityVerdict::Kind::UnknownAtBound: return 2;
            }
        }

        if (app.got_subcommand(equiv_cmd)) {
            DiagramDocument da = cli_detail::load_document(equiv_a);
            DiagramDocument db = cli_detail::load_document(equiv_b);
            const BratteliDiagram& a = da.diagram;
            const BratteliDiagram& b = db.diagram;

            std::optional<Supernatural> sa, sb;
            try {
                sa = supernatural_invariant(a);
            } catch (const Error& e) {
                if (e.code() != Errc::NotUHFShape) throw;
            }
            try {
                sb = supernatural_invariant(b);
            } catch (const Error& e) {
                if (e.code() != Errc::NotUHFShape) throw;
            }

            json j;
            j["bound"] = equiv_bound;
            j["supernatural_a"] = sa ? json(to_string(*sa)) : json(nullptr);
            j["supernatural_b"] = sb ? json(to_string(*sb)) : json(nullptr);

            bool exact_profiles =
                sa && sb && !sa->lower_bound_only && !sb->lower_bound_only;
            if (exact_profiles && !(*sa == *sb)) {
                std::string reason =
                    "supernatural invariants differ: " + to_string(*sa) + " vs " + to_string(*sb);
                if (equiv_json) {
                    j["result"] = "distinguished";
                    j["reason"] = reason;
                    j["witness"] = nullptr;
                    out << j.dump(2) << "\n";
                } else {
                    out << "distinguished: " << reason << "\n";
                }
                return 1;
            }

            EquivalenceResult res = find_intertwining(a, b, equiv_bound);
            if (res.found) {
                const IntertwiningWitness& w = *res.witness;
                if (equiv_json) {
                    j["result"] = "found";
                    j["reason"] = nullptr;
                    json wj;
                    wj["levels_a"] = w.levels_a;
                    wj["levels_b"] = w.levels_b;
                    json maps = json::array();
                    for (const auto& m : w.maps) maps.push_back(cli_detail::matrix_to_json(m));
                    wj["maps"] = maps;
                    j["witness"] = wj;
                    out << j.dump(2) << "\n";
                } else {
                    out << "found\n";
                    out << "levels_a";
                    for (std::size_t l : w.levels_a) out << ' ' << l;
                    out << "\nlevels_b";
                    for (std::size_t l : w.levels_b) out << ' ' << l;
                    out << "\n";
                    for (std::size_t i = 0; i < w.maps.size(); ++i) {
                        out << "map " << i << "\n";
                        out << cli_detail::matrix_lines(w.maps[i]);
                    }
                }
                return 0;
            }

            // no witness within the bound; exact profiles equal means the
            // diagrams ARE equivalent, so never report them distinguished
            if (!exact_profiles && a.stationary() && b.stationary()) {
                InvariantReport ra = stationary_invariants(k0_presentation(a), 1e-12);
                InvariantReport rb = stationary_invariants(k0_presentation(b), 1e-12);
                ComparisonResult cmp = compare_invariants(ra, rb);
                if (cmp.distinguished) {
                    std::string reason = "stationary invariants differ: " + cmp.reason;
                    if (equiv_json) {
                        j["result"] = "distinguished";
                        j["reason"] = reason;
                        j["witness"] = nullptr;
                        out << j.dump(2) << "\n";
                    } else {
                        out << "distinguished: " << reason << "\n";
                    }
                    return 1;
                }
            }

            if (equiv_json) {
                j["result"] = "not_found";
                j["reason"] = nullptr;
                j["witness"] = nullptr;
                out << j.dump(2) << "\n";
            } else {
                out << "not found within bound " << equiv_bound << "\n";
            }
            return 2;
        }

        if (app.got_subcommand(k0_cmd)) {
            DiagramDocument doc = cli_detail::load_document(k0_file);
            StationaryPresentation p = k0_presentation(doc.diagram);
            InvariantReport r = stationary_invariants(p, k0_tolerance);
            if (k0_json) {
                json j;
                j["rank"] = p.rank;
                j["matrix"] = cli_detail::matrix_to_json(p.matrix);
                j["unit"] = cli_detail::int_vector_to_json(p.unit.values);
                j["char_poly"] = cli_detail::int_vector_to_json(r.char_poly);
                j["char_poly_pretty"] = poly_to_string(r.char_poly);
                j["determinant"] = r.determinant.str();
                j["eventual_rank"] = r.eventual_rank;
                j["perron"] = r.perron;
                j["perron_tolerance"] = r.perron_tolerance;
                j["primitive"] = r.primitive;
                out << j.dump(2) << "\n";
            } else {
                out << "rank " << p.rank << "\n";
                out << "matrix\n" << cli_detail::matrix_lines(p.matrix);
                out << "unit";
                for (const Int& u : p.unit.values) out << ' ' << u.str();
                out << "\n";
                out << "char_poly " << poly_to_string(r.char_poly) << "\n";
                out << "determinant " << r.determinant.str() << "\n";
                out << "eventual_rank " << r.eventual_rank << "\n";
                out << "perron " << fixed(r.perron, 10) << "\n";
                out << "primitive " << (r.primitive ? "true" : "false") << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(ver_cmd)) {
            if (ver_depth < 1) throw Error(Errc::BadParam, "--depth must be at least 1");
            DiagramDocument doc = cli_detail::load_document(ver_file);
            OrderedBratteliDiagram od = doc.ordered();
            PathWord start;
            if (ver_start == "min")
                start = min_path(od, ver_depth);
            else if (ver_start == "max")
                start = max_path(od, ver_depth);
            else {
                start = parse_path(ver_start);
                if (start.depth() != ver_depth)
                    throw Error(Errc::BadParam, "--start path depth " +
                                                    std::to_string(start.depth()) +
                                                    " does not match --depth " +
                                                    std::to_string(ver_depth));
            }
            std::vector<PathWord> paths = orbit(od, start, ver_steps);
            std::vector<CylinderMeasure> measures;
            if (ver_measure)
                for (const PathWord& p : paths)
                    measures.push_back(stationary_measure(od.diagram(), p));
            if (ver_json) {
                json j;
                j["depth"] = ver_depth;
                j["steps"] = ver_steps;
                json arr = json::array();
                for (std::size_t i = 0; i < paths.size(); ++i) {
                    json e;
                    e["path"] = path_to_string(paths[i]);
                    if (ver_measure) e["measure"] = cli_detail::measure_to_json(measures[i]);
                    arr.push_back(std::move(e));
                }
                j["orbit"] = arr;
                out << j.dump(2) << "\n";
            } else {
                for (std::size_t i = 0; i < paths.size(); ++i) {
                    out << path_to_string(paths[i]);
                    if (ver_measure) out << " mu " << cli_detail::measure_text(measures[i]);
                    out << "\n";
                }
            }
            return 0;
        }

        if (app.got_subcommand(tower_cmd)) {
            MarkedGraph g = dynkin(cli_detail::parse_dynkin_type(tower_type), tower_rank,
                                   tower_start);
            TowerDiagram t = tower_diagram(g, tower_depth);
            std::string text = serialize_bd(DiagramDocument::make(t.diagram));
            if (tower_json) {
                json j;
                j["bd"] = text;
                out << j.dump(2) << "\n";
            } else {
                cli_detail::emit_text(out, text, tower_out);
            }
            return 0;
        }

        if (app.got_subcommand(norm_cmd)) {
            MarkedGraph g = dynkin(cli_detail::parse_dynkin_type(norm_type), norm_rank);
            if (!(norm_tolerance > 0)) throw Error(Errc::BadParam, "tolerance must be positive");
            NormResult r = graph_norm(g, Rat(norm_tolerance));
            if (norm_json) {
                json j;
                j["type"] = std::string(1, dynkin_letter(cli_detail::parse_dynkin_type(norm_type)));
                j["rank"] = norm_rank;
                j["norm"] = r.norm;
                j["index"] = r.index;
                j["lo"] = r.lo;
                j["hi"] = r.hi;
                out << j.dump(2) << "\n";
            } else {
                out << "norm " << fixed(r.norm, 9) << " index " << fixed(r.index, 9) << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(gen_cmd)) {
            DiagramDocument doc = cli_detail::run_generator(gen_kind, gen_params);
            std::string text = serialize_bd(doc);
            if (gen_json) {
                json j;
                j["bd"] = text;
                out << j.dump(2) << "\n";
            } else {
                cli_detail::emit_text(out, text, gen_out);
            }
            return 0;
        }

        if (app.got_subcommand(dot_cmd)) {
            DiagramDocument doc = cli_detail::load_document(dot_file);
            DotOptions opts;
            opts.depth = dot_depth;
            opts.expand = dot_expand;
            std::string text = export_dot(doc.diagram, opts);
            if (dot_json) {
                json j;
                j["dot"] = text;
                out << j.dump(2) << "\n";
            } else {
                cli_detail::emit_text(out, text, dot_out);
            }
            return 0;
        }

        if (app.got_subcommand(fmt_cmd)) {
            DiagramDocument doc = cli_detail::load_document(fmt_file);
            std::string text = serialize_bd(doc);
            if (fmt_json) {
                json j;
                j["bd"] = text;
                out << j.dump(2) << "\n";
            } else {
                cli_detail::emit_text(out, text, fmt_out);
            }
            return 0;
        }

        err << "internal error: no subcommand dispatched\n";
        return 70;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 65;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 70;
    }
}

}  // namespace bratteli
