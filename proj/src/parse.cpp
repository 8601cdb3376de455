#include "cartier/parse.hpp"

#include <cctype>
#include <limits>

namespace cartier {

namespace {

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool done() {
    skip_ws();
    return i_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  std::size_t column() {
    skip_ws();
    return i_ + 1;
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  std::uint64_t nat() {
    skip_ws();
    std::size_t start = i_;
    std::uint64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      if (v > (std::numeric_limits<std::uint32_t>::max() - 9) / 10)
        throw ParseError(start + 1, "number too large");
      v = v * 10 + static_cast<std::uint64_t>(s_[i_++] - '0');
    }
    if (i_ == start) throw ParseError(start + 1, "expected a number");
    return v;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = i_;
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      ++i_;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
    }
    if (i_ == start) throw ParseError(start + 1, "expected a variable or number");
    return std::string(s_.substr(start, i_ - start));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

Polynomial parse_factor(const Ring& ring, Lexer& lx) {
  if (std::isdigit(static_cast<unsigned char>(lx.peek())))
    return Polynomial::constant(ring, static_cast<std::int64_t>(lx.nat() % ring.p()));
  std::size_t col = lx.column();
  std::string name = lx.ident();
  int idx = ring.var_index(name);
  if (idx < 0) throw ParseError(col, "unknown variable '" + name + "'");
  Polynomial v = Polynomial::variable(ring, static_cast<std::size_t>(idx));
  if (lx.accept('^')) return v.pow(lx.nat());
  return v;
}

Polynomial parse_term(const Ring& ring, Lexer& lx) {
  Polynomial t = parse_factor(ring, lx);
  while (lx.accept('*')) t = t * parse_factor(ring, lx);
  return t;
}

}  // namespace

Polynomial parse_polynomial(const Ring& ring, std::string_view text) {
  Lexer lx(text);
  if (lx.done()) throw ParseError(1, "empty polynomial");
  bool negate = false;
  if (lx.accept('-')) negate = true;
  else lx.accept('+');
  Polynomial acc = parse_term(ring, lx);
  if (negate) acc = -acc;
  while (!lx.done()) {
    std::size_t col = lx.column();
    if (lx.accept('+')) acc += parse_term(ring, lx);
    else if (lx.accept('-')) acc -= parse_term(ring, lx);
    else throw ParseError(col, std::string("unexpected '") + lx.peek() + "'");
  }
  return acc;
}

Ring parse_ring(std::uint32_t p, std::string_view vars) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= vars.size()) {
    auto end = vars.find(',', start);
    if (end == std::string_view::npos) end = vars.size();
    std::string name;
    for (char c : vars.substr(start, end - start))
      if (!std::isspace(static_cast<unsigned char>(c))) name += c;
    if (!name.empty()) {
      bool ok = std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_';
      for (char c : name) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
      if (!ok) throw ParseError(start + 1, "invalid variable name '" + name + "'");
      names.push_back(name);
    } else if (end < vars.size()) {
      throw ParseError(start + 1, "empty variable name");
    }
    start = end + 1;
  }
  return Ring(p, std::move(names));
}

Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  auto slash = s.find('/');
  auto parse_int = [&](const std::string& part, std::size_t offset) -> std::int64_t {
    std::size_t i = 0;
    bool neg = false;
    if (i < part.size() && (part[i] == '-' || part[i] == '+')) neg = part[i++] == '-';
    if (i == part.size()) throw ParseError(offset + i + 1, "expected an integer");
    std::int64_t v = 0;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        throw ParseError(offset + i + 1, "expected a digit");
      if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
        throw ParseError(offset + 1, "integer too large");
      v = v * 10 + (part[i] - '0');
    }
    return neg ? -v : v;
  };
  if (slash == std::string::npos) return Rational(parse_int(s, 0));
  auto num = parse_int(s.substr(0, slash), 0);
  auto den = parse_int(s.substr(slash + 1), slash + 1);
  if (den <= 0) throw ParseError(slash + 2, "denominator must be positive");
  return Rational(num, den);
}

std::pair<Rational, Rational> parse_range(std::string_view text) {
  auto dots = text.find("..");
  if (dots == std::string_view::npos) throw ParseError(1, "expected a range a..b");
  Rational lo = parse_rational(text.substr(0, dots));
  Rational hi;
  try {
    hi = parse_rational(text.substr(dots + 2));
  } catch (const ParseError& e) {
    throw ParseError(e.column() + dots + 2, e.detail());
  }
  if (hi < lo) throw ParseError(1, "empty range");
  return {lo, hi};
}

std::vector<std::vector<Polynomial>> parse_rows(const Ring& ring, std::string_view text) {
  std::vector<std::vector<Polynomial>> rows;
  bool blank = true;
  for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) return rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::vector<Polynomial> row;
    std::size_t s = start;
    while (s <= end) {
      auto e = text.find(',', s);
      if (e == std::string_view::npos || e > end) e = end;
      try {
        row.push_back(parse_polynomial(ring, text.substr(s, e - s)));
      } catch (const ParseError& err) {
        throw ParseError(err.column() + s, err.detail());
      }
      s = e + 1;
    }
    rows.push_back(std::move(row));
    start = end + 1;
  }
  return rows;
}

namespace {

FreeSubmodule rows_module(const Ring& R, std::size_t rank,
                          const std::vector<std::vector<Polynomial>>& rows, const char* what) {
  for (const auto& r : rows)
    if (r.size() != rank)
      fail(ErrorCode::InvalidInput,
           std::string(what) + " vectors must have " + std::to_string(rank) + " entries");
  return FreeSubmodule(R, rank, rows);
}

}  // namespace

CartierModule parse_module(const Ring& ring, std::string_view twist, std::string_view gens,
                           std::string_view rels) {
  auto U = parse_rows(ring, twist);
  auto G = parse_rows(ring, gens);
  auto N = parse_rows(ring, rels);
  std::size_t r = !U.empty()   ? U.size()
                  : !G.empty() ? G.front().size()
                  : !N.empty() ? N.front().size()
                               : 1;
  if (U.empty()) U = identity_matrix(ring, r);
  for (const auto& row : U)
    if (row.size() != r) fail(ErrorCode::InvalidInput, "twist matrix must be square");
  FreeSubmodule W = G.empty() ? FreeSubmodule::whole(ring, r) : rows_module(ring, r, G, "generator");
  return CartierModule(QuotientPresentation(W, rows_module(ring, r, N, "relation")),
                       CartierStructure(ring, U));
}

}  // namespace cartier
