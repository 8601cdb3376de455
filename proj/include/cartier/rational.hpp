#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

namespace cartier {

using Rational = boost::rational<std::int64_t>;
using BigInt = boost::multiprecision::cpp_int;

std::string to_string(const Rational& r);
std::int64_t floor(const Rational& r);
std::int64_t ceil(const Rational& r);

/// Exponent of p in n (n > 0).
unsigned p_valuation(std::int64_t n, std::uint32_t p);
/// Multiplicative order of p modulo m (m coprime to p); 1 when m == 1.
unsigned multiplicative_order(std::uint32_t p, std::int64_t m);

/// All reduced fractions a/b in [lo, hi] with 1 <= b <= max_den, ascending.
std::vector<Rational> farey_candidates(const Rational& lo, const Rational& hi,
                                       std::int64_t max_den);

}  // namespace cartier
