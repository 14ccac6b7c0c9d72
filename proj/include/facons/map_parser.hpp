#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "facons/poly.hpp"

namespace facons {

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

struct MapDocument {
  std::vector<std::string> source_vars;
  std::vector<std::string> target_vars;
  std::vector<std::string> component_exprs;
  std::map<std::string, std::string> options;
};

struct ParsedMap {
  MapDocument document;
  PolynomialMap map;
};

/// Parses the map file format:
///
///   vars: x1 x2
///   [targets: a1 a2]
///   map:
///     <expr>
///     <expr>
///
/// `#` starts a comment. Expressions use + - * ^ and parentheses; `*` is
/// mandatory, exponents are nonnegative integers and coefficients may be
/// written p/q. Other `key: value` header lines before `map:` are kept as
/// options. Several expressions may share a line when separated by `;`.
ParsedMap parse_map(std::string_view text);

/// Parse a single expression over a given arena.
Polynomial parse_polynomial(std::string_view expr, const ArenaPtr& arena);

/// Canonical text form; parse_map(format_map(m)) reproduces m.
std::string format_map(const PolynomialMap& map);

bool valid_variable_name(std::string_view name);

}  // namespace facons
