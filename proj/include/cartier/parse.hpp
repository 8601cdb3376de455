#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cartier/cartier_module.hpp"
#include "cartier/field_poly.hpp"
#include "cartier/rational.hpp"

namespace cartier {

/// Parse error carrying a 1-based column into the parsed string.
class ParseError : public Error {
 public:
  ParseError(std::size_t column, const std::string& message)
      : Error(ErrorCode::InvalidInput, message + " at column " + std::to_string(column)),
        column_(column), detail_(message) {}
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t column_;
  std::string detail_;
};

/// expr := term (('+'|'-') term)*, term := (coeff | factor) ('*' factor)*,
/// factor := ident ('^' nat)?. A leading sign is accepted.
Polynomial parse_polynomial(const Ring& ring, std::string_view text);

/// Comma separated variable names; empty string gives the 0-variable ring.
Ring parse_ring(std::uint32_t p, std::string_view vars);

/// "a/b" or "a"; b > 0.
Rational parse_rational(std::string_view text);

/// "a..b" with rational endpoints.
std::pair<Rational, Rational> parse_range(std::string_view text);

/// Rows separated by ';', entries by ','. Empty text gives no rows.
std::vector<std::vector<Polynomial>> parse_rows(const Ring& ring, std::string_view text);

/// Module from row syntax. The rank comes from the twist, else from the
/// generators, else from the relations, else 1. Missing twist is the identity,
/// missing generators the whole free module.
CartierModule parse_module(const Ring& ring, std::string_view twist, std::string_view gens,
                           std::string_view rels);

}  // namespace cartier
