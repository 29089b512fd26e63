#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mpst/types.hpp"

namespace mpst {

/// Error raised while reading any of the concrete syntaxes. The position
/// points into the offending input (1-based line and column).
class SourceError : public std::runtime_error {
public:
    enum class Kind { Lex, Parse, Validation };

    SourceError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          kind(kind),
          line(line),
          column(column),
          message(message) {}

    Kind kind;
    std::size_t line;
    std::size_t column;
    std::string message;
};

/// A parsed `global protocol` declaration: name, declared roles and the
/// protocol body.
struct GlobalProtocol {
    std::string name;
    std::vector<Role> roles;
    GlobalRef type;
};

/// Parses the global-protocol DSL:
///
///   global protocol Name(role A, role B, ...) {
///     label(Sort?) from A to B;
///     choice at A { ... } or { ... } ...
///     rec X { ... }
///     continue X;
///   }
///
/// `choice`, `rec` and `continue` must each be the final statement of their
/// block. Every `choice at A` block must begin with a message from A to one
/// common receiver; these heading messages become the branches.
GlobalProtocol parse_global(std::string_view text);

/// Parses the compact local-type grammar:
///   end | X | rec X . T | P!l(S).T | P?l(S).T | P!{ l1(S1).T1, ... } | P?{ ... }
/// with `(S)` optional everywhere.
LocalRef parse_local(std::string_view text);

/// Canonical rendering; parse_local(format_local(t)) is structurally equal
/// to t for every well-formed type.
std::string format_local(const LocalRef& type);

}  // namespace mpst
