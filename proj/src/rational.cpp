#include "cartier/rational.hpp"

#include <algorithm>
#include <set>

#include "cartier/error.hpp"

namespace cartier {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t floor(const Rational& r) {
  auto n = r.numerator(), d = r.denominator();
  auto q = n / d;
  if (n % d != 0 && n < 0) --q;
  return q;
}

std::int64_t ceil(const Rational& r) { return -floor(-r); }

unsigned p_valuation(std::int64_t n, std::uint32_t p) {
  if (n <= 0) fail(ErrorCode::InvalidInput, "valuation of a non-positive integer");
  unsigned v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

unsigned multiplicative_order(std::uint32_t p, std::int64_t m) {
  if (m == 1) return 1;
  if (m % p == 0) fail(ErrorCode::InvalidInput, "order of p modulo a multiple of p");
  std::int64_t x = p % m;
  unsigned r = 1;
  while (x != 1) {
    x = static_cast<std::int64_t>(static_cast<__int128>(x) * p % m);
    if (++r > 100000) fail(ErrorCode::CapExceeded, "multiplicative order too large");
  }
  return r;
}

std::vector<Rational> farey_candidates(const Rational& lo, const Rational& hi,
                                       std::int64_t max_den) {
  if (max_den < 1) fail(ErrorCode::InvalidInput, "max denominator must be positive");
  std::set<Rational> out;
  for (std::int64_t b = 1; b <= max_den; ++b) {
    for (std::int64_t a = ceil(lo * b); Rational(a, b) <= hi; ++a) out.insert(Rational(a, b));
  }
  return {out.begin(), out.end()};
}

}  // namespace cartier
