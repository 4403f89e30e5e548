#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace bratteli {

enum class Errc {
    ShapeMismatch,
    ZeroRow,
    NonSquareTail,
    EmptyDiagram,
    NonUnitalRoot,
    NegativeEntry,
    LevelOutOfRange,
    UnsortedKeepList,
    MissingRoot,
    BadParam,
    BoundTooSmall,
    NotUHFShape,
    NotStationary,
    NotPrimitive,
    InvalidPath,
    InvalidOrder,
    BadRank,
    BadDepth,
    Disconnected,
    ParseError,
    ConvergenceFailure,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::ZeroRow: return "ZeroRow";
        case Errc::NonSquareTail: return "NonSquareTail";
        case Errc::EmptyDiagram: return "EmptyDiagram";
        case Errc::NonUnitalRoot: return "NonUnitalRoot";
        case Errc::NegativeEntry: return "NegativeEntry";
        case Errc::LevelOutOfRange: return "LevelOutOfRange";
        case Errc::UnsortedKeepList: return "UnsortedKeepList";
        case Errc::MissingRoot: return "MissingRoot";
        case Errc::BadParam: return "BadParam";
        case Errc::BoundTooSmall: return "BoundTooSmall";
        case Errc::NotUHFShape: return "NotUHFShape";
        case Errc::NotStationary: return "NotStationary";
        case Errc::NotPrimitive: return "NotPrimitive";
        case Errc::InvalidPath: return "InvalidPath";
        case Errc::InvalidOrder: return "InvalidOrder";
        case Errc::BadRank: return "BadRank";
        case Errc::BadDepth: return "BadDepth";
        case Errc::Disconnected: return "Disconnected";
        case Errc::ParseError: return "ParseError";
        case Errc::ConvergenceFailure: return "ConvergenceFailure";
    }
    return "Unknown";
}

/// Library error: a code plus a human-readable message.  Parse errors carry
/// a 1-based line and column.
class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, std::string message, std::size_t line, std::size_t column)
        : std::runtime_error(std::string(errc_name(code)) + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ": " + message),
          code_(code),
          line_(line),
          column_(column) {}

    Errc code() const { return code_; }
    std::optional<std::size_t> line() const { return line_; }
    std::optional<std::size_t> column() const { return column_; }

private:
    Errc code_;
    std::optional<std::size_t> line_;
    std::optional<std::size_t> column_;
};

}  // namespace bratteli
