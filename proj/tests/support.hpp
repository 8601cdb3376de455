#pragma once

#include <random>
#include <string>
#include <vector>

#include "cartier/groebner.hpp"
#include "cartier/parse.hpp"

namespace cartier::testing {

inline Polynomial P(const Ring& R, const std::string& s) { return parse_polynomial(R, s); }

inline FreeSubmodule I(const Ring& R, const std::vector<std::string>& gens) {
  std::vector<Polynomial> ps;
  for (const auto& g : gens) ps.push_back(P(R, g));
  return FreeSubmodule::ideal(R, ps);
}

inline FreeSubmodule Mod(const Ring& R, std::size_t rank,
                         const std::vector<std::vector<std::string>>& gens) {
  std::vector<Vec> vs;
  for (const auto& g : gens) {
    Vec v;
    for (const auto& s : g) v.push_back(P(R, s));
    vs.push_back(std::move(v));
  }
  return FreeSubmodule(R, rank, std::move(vs));
}

inline Matrix Mat(const Ring& R, const std::vector<std::vector<std::string>>& rows) {
  Matrix m;
  for (const auto& row : rows) {
    std::vector<Polynomial> r;
    for (const auto& s : row) r.push_back(P(R, s));
    m.push_back(std::move(r));
  }
  return m;
}

/// Random polynomial with up to `terms` terms and exponents below `max_exp`.
inline Polynomial random_poly(std::mt19937_64& rng, const Ring& R, int terms, int max_exp) {
  std::uniform_int_distribution<int> nt(0, terms), ex(0, max_exp - 1);
  std::uniform_int_distribution<std::uint32_t> co(1, R.p() - 1);
  std::vector<Term> ts;
  int n = nt(rng);
  for (int k = 0; k < n; ++k) {
    Monomial m;
    for (std::size_t i = 0; i < R.arity(); ++i) m.exp[i] = static_cast<std::uint32_t>(ex(rng));
    ts.push_back(Term{m, co(rng)});
  }
  return Polynomial(R, std::move(ts));
}

inline Polynomial random_nonzero_poly(std::mt19937_64& rng, const Ring& R, int terms, int max_exp) {
  for (;;) {
    auto f = random_poly(rng, R, terms, max_exp);
    if (!f.is_zero()) return f;
  }
}

inline Polynomial random_monomial(std::mt19937_64& rng, const Ring& R, int max_exp) {
  std::uniform_int_distribution<int> ex(0, max_exp - 1);
  Monomial m;
  for (std::size_t i = 0; i < R.arity(); ++i) m.exp[i] = static_cast<std::uint32_t>(ex(rng));
  return Polynomial::monomial(R, m);
}

/// Number of random cases per property; kept small so the suite stays fast.
inline int cases(int n = 25) { return n; }

}  // namespace cartier::testing
